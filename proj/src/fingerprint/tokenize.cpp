#include "osskg/fingerprint/tokenize.hpp"

#include <algorithm>
#include <stdexcept>

namespace osskg::fingerprint {
namespace {

bool is_ident(unsigned char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_space(unsigned char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

std::size_t code_point_length(unsigned char lead) noexcept {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      ++i;
    } else if (is_ident(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && is_ident(static_cast<unsigned char>(text[j]))) ++j;
      tokens.emplace_back(text.substr(i, j - i));
      i = j;
    } else {
      const std::size_t len = std::min(code_point_length(c), text.size() - i);
      tokens.emplace_back(text.substr(i, len));
      i += len;
    }
  }
  return tokens;
}

std::vector<Snippet> split_snippets(const std::vector<std::string>& tokens, std::size_t snippet_len) {
  if (snippet_len == 0) throw std::invalid_argument("snippet_len must be >= 1");
  std::vector<Snippet> out;
  out.reserve((tokens.size() + snippet_len - 1) / snippet_len);
  for (std::size_t i = 0; i < tokens.size(); i += snippet_len) {
    const std::size_t end = std::min(tokens.size(), i + snippet_len);
    out.push_back({std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                            tokens.begin() + static_cast<std::ptrdiff_t>(end))});
  }
  return out;
}

}  // namespace osskg::fingerprint
