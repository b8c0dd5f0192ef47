#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace confuse {

// Root of every error the library throws. Callers that only care about
// "did this case fail" catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or violated precondition (k = 0, wrong vote length, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed record in a JSONL file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateIdError : public Error {
 public:
  explicit DuplicateIdError(const std::string& id)
      : Error("duplicate id '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class TransportError : public Error {
 public:
  TransportError(const std::string& what, int status = 0)
      : Error(what), status_(status) {}
  int status() const noexcept { return status_; }
  // 5xx, 429 and connection-level failures (status 0) are worth retrying.
  bool transient() const noexcept {
    return status_ == 0 || status_ == 429 || status_ >= 500;
  }

 private:
  int status_;
};

class UnscriptedRequestError : public Error {
 public:
  explicit UnscriptedRequestError(const std::string& fingerprint)
      : Error("unscripted request " + fingerprint), fingerprint_(fingerprint) {}
  const std::string& fingerprint() const noexcept { return fingerprint_; }

 private:
  std::string fingerprint_;
};

class StructuredOutputError : public Error {
 public:
  StructuredOutputError(const std::string& what, std::string first_raw,
                        std::string second_raw)
      : Error(what),
        first_raw_(std::move(first_raw)),
        second_raw_(std::move(second_raw)) {}
  const std::string& first_raw() const noexcept { return first_raw_; }
  const std::string& second_raw() const noexcept { return second_raw_; }

 private:
  std::string first_raw_;
  std::string second_raw_;
};

class KeyMissingError : public Error {
 public:
  explicit KeyMissingError(const std::string& key)
      : Error("required key missing: " + key), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Model produced something other than the expected A/B/C (or score) twice.
class InvalidJudgmentError : public Error {
 public:
  using Error::Error;
};

class DegenerateAmbiguationError : public Error {
 public:
  using Error::Error;
};

class ShortfallError : public Error {
 public:
  using Error::Error;
};

class UnsupportedCaseError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace confuse
