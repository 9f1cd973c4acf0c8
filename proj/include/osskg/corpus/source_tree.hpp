#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "osskg/corpus/record.hpp"

namespace osskg::corpus {

/// True for the extensions that contribute to code documents: .js, .py, .rb.
bool is_source_file(std::string_view relative_path) noexcept;

/// All regular .js/.py/.rb files under `tree`, as '/'-separated relative
/// paths sorted by byte-wise comparison.
std::vector<std::string> enumerate_source_files(const std::filesystem::path& tree);

/// Decodes bytes as UTF-8, replacing every invalid sequence with U+FFFD.
std::string decode_utf8_lossy(std::string_view bytes);

struct SourceFile {
  std::string relative_path;
  std::size_t byte_length = 0;  // length of the decoded text inside merged_text

  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

/// The canonical merged source of one unpacked package.
struct CodeDocument {
  std::string record_id;
  std::vector<SourceFile> files;
  std::string merged_text;  // file texts in `files` order joined by '\n'
  std::size_t token_count = 0;

  bool code_empty() const noexcept { return files.empty(); }

  /// Offset of file `index` inside merged_text.
  std::size_t file_offset(std::size_t index) const noexcept;
  std::string_view file_text(std::size_t index) const noexcept;

  friend bool operator==(const CodeDocument&, const CodeDocument&) = default;
};

/// Reads every source file of `tree`. Requires an available record; a tree
/// without source files yields an empty, code_empty() document.
CodeDocument build_code_document(const PackageRecord& record, const std::filesystem::path& tree);

/// Same canonicalization from in-memory (path, raw bytes) pairs; non-source
/// paths are ignored. Used by tests and bindings.
CodeDocument build_code_document(std::string record_id,
                                 std::vector<std::pair<std::string, std::string>> files);

}  // namespace osskg::corpus
