#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace osskg {

/// Coarse error classes. The CLI prints the class name as the first token of
/// its one-line error message so wrappers can dispatch on it.
enum class ErrorKind {
  io,
  parse,
  validation,
  duplicate_id,
  unsupported_archive,
  corrupt_archive,
  path_traversal,
  code_empty,
  dangling_endpoint,
  version_mismatch,
  stage_order,
  bad_flag,
  locked,
  insufficient_data,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

enum class Severity { info, warning, error };

std::string_view to_string(Severity severity) noexcept;

/// Non-fatal finding attached to one input (a row, a record, a report file).
struct Diagnostic {
  Severity severity = Severity::warning;
  std::string code;     // short machine tag, e.g. "hash-conflict"
  std::string subject;  // record id, file path, "catalog.jsonl:7", ...
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

std::string format_diagnostic(const Diagnostic& d);

}  // namespace osskg
