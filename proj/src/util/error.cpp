#include "osskg/util/error.hpp"

namespace osskg {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::duplicate_id: return "duplicate-id";
    case ErrorKind::unsupported_archive: return "unsupported-archive";
    case ErrorKind::corrupt_archive: return "corrupt-archive";
    case ErrorKind::path_traversal: return "path-traversal";
    case ErrorKind::code_empty: return "code-empty";
    case ErrorKind::dangling_endpoint: return "dangling-endpoint";
    case ErrorKind::version_mismatch: return "version-mismatch";
    case ErrorKind::stage_order: return "stage-order";
    case ErrorKind::bad_flag: return "bad-flag";
    case ErrorKind::locked: return "locked";
    case ErrorKind::insufficient_data: return "insufficient-data";
  }
  return "unknown";
}

std::string_view to_string(Severity severity) noexcept {
  switch (severity) {
    case Severity::info: return "info";
    case Severity::warning: return "warning";
    case Severity::error: return "error";
  }
  return "unknown";
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out;
  out += to_string(d.severity);
  out += '\t';
  out += d.code;
  out += '\t';
  out += d.subject;
  out += '\t';
  out += d.message;
  return out;
}

}  // namespace osskg
