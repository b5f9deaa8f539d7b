#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace longtail {

// Input errors map to CLI exit code 1, InvariantViolation to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class MalformedLine : public InputError {
 public:
  MalformedLine(std::size_t line_no, const std::string& reason);
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class DanglingReference : public InputError {
 public:
  DanglingReference(const std::string& kind, std::uint64_t id,
                    std::size_t line_no = 0);
};

class DuplicateId : public InputError {
 public:
  DuplicateId(const std::string& kind, std::uint64_t id,
              std::size_t line_no = 0);
};

class SelfLoop : public InputError {
 public:
  SelfLoop(std::uint64_t view_id, std::size_t line_no);
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidArgument : public InputError {
 public:
  using InputError::InputError;
};

class EmptyGraph : public InputError {
 public:
  EmptyGraph() : InputError("modularity is undefined on a graph without edges") {}
};

class UnknownNode : public InputError {
 public:
  explicit UnknownNode(std::uint64_t id);
};

class DisconnectedTerminals : public InputError {
 public:
  explicit DisconnectedTerminals(std::vector<std::uint32_t> unreachable);
  const std::vector<std::uint32_t>& unreachable() const { return unreachable_; }

 private:
  std::vector<std::uint32_t> unreachable_;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace longtail
