#pragma once

#include <stdexcept>
#include <string>

namespace turnsim {

/// Malformed layout, run config or scenario text.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

/// A seat cannot be reached from one of the doors.
class ConnectivityError : public std::runtime_error {
public:
  ConnectivityError(std::string seat, const std::string& what)
      : std::runtime_error(what), seat_(std::move(seat)) {}
  const std::string& seat() const noexcept { return seat_; }

private:
  std::string seat_;
};

class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The tick ceiling was hit; `snapshot` describes where everybody was.
class DeadlockError : public std::runtime_error {
public:
  DeadlockError(const std::string& what, std::string snapshot)
      : std::runtime_error(what), snapshot_(std::move(snapshot)) {}
  const std::string& snapshot() const noexcept { return snapshot_; }

private:
  std::string snapshot_;
};

class DivisionError : public std::domain_error {
  using std::domain_error::domain_error;
};

class CycleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace turnsim
