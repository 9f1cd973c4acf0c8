#include "osskg/corpus/source_tree.hpp"

#include <algorithm>

#include "osskg/corpus/archive.hpp"
#include "osskg/fingerprint/tokenize.hpp"
#include "osskg/util/error.hpp"

namespace fs = std::filesystem;

namespace osskg::corpus {

bool is_source_file(std::string_view p) noexcept {
  return p.ends_with(".js") || p.ends_with(".py") || p.ends_with(".rb");
}

std::vector<std::string> enumerate_source_files(const fs::path& tree) {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(tree, ec)) return out;
  for (auto it = fs::recursive_directory_iterator(tree, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (it->is_symlink() || !it->is_regular_file()) continue;
    std::string rel = fs::relative(it->path(), tree).generic_string();
    if (is_source_file(rel)) out.push_back(std::move(rel));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string decode_utf8_lossy(std::string_view in) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(in[k]); };
  const auto cont = [&](std::size_t k) { return k < in.size() && (byte(k) & 0xC0) == 0x80; };
  while (i < in.size()) {
    const unsigned char c = byte(i);
    std::size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if (c >= 0xC2 && c <= 0xDF) {
      len = cont(i + 1) ? 2 : 0;
    } else if (c >= 0xE0 && c <= 0xEF) {
      if (cont(i + 1) && cont(i + 2)) {
        const unsigned char c1 = byte(i + 1);
        const bool overlong = c == 0xE0 && c1 < 0xA0;
        const bool surrogate = c == 0xED && c1 >= 0xA0;
        len = (overlong || surrogate) ? 0 : 3;
      }
    } else if (c >= 0xF0 && c <= 0xF4) {
      if (cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        const unsigned char c1 = byte(i + 1);
        const bool overlong = c == 0xF0 && c1 < 0x90;
        const bool too_big = c == 0xF4 && c1 >= 0x90;
        len = (overlong || too_big) ? 0 : 4;
      }
    }
    if (len == 0) {
      out += kReplacement;
      ++i;
    } else {
      out.append(in.substr(i, len));
      i += len;
    }
  }
  return out;
}

std::size_t CodeDocument::file_offset(std::size_t index) const noexcept {
  std::size_t offset = 0;
  for (std::size_t k = 0; k < index && k < files.size(); ++k) offset += files[k].byte_length + 1;
  return offset;
}

std::string_view CodeDocument::file_text(std::size_t index) const noexcept {
  if (index >= files.size()) return {};
  return std::string_view(merged_text).substr(file_offset(index), files[index].byte_length);
}

CodeDocument build_code_document(std::string record_id,
                                 std::vector<std::pair<std::string, std::string>> files) {
  std::erase_if(files, [](const auto& f) { return !is_source_file(f.first); });
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  CodeDocument doc;
  doc.record_id = std::move(record_id);
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::string text = decode_utf8_lossy(files[i].second);
    if (i > 0) doc.merged_text += '\n';
    doc.merged_text += text;
    doc.files.push_back({files[i].first, text.size()});
  }
  doc.token_count = fingerprint::tokenize(doc.merged_text).size();
  return doc;
}

CodeDocument build_code_document(const PackageRecord& record, const fs::path& tree) {
  if (!record.available()) {
    throw Error(ErrorKind::validation, "record " + record.record_id + " is not available");
  }
  std::vector<std::pair<std::string, std::string>> files;
  for (auto& rel : enumerate_source_files(tree)) {
    std::string bytes = read_file_bytes(tree / fs::path(rel));
    files.emplace_back(std::move(rel), std::move(bytes));
  }
  return build_code_document(record.record_id, std::move(files));
}

}  // namespace osskg::corpus
