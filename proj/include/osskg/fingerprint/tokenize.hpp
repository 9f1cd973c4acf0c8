#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace osskg::fingerprint {

/// Maximal runs of [A-Za-z0-9_] are one token; every other non-whitespace
/// character (a whole UTF-8 code point) is a token on its own.
std::vector<std::string> tokenize(std::string_view text);

inline constexpr std::size_t kDefaultSnippetLen = 512;

struct Snippet {
  std::vector<std::string> tokens;

  friend bool operator==(const Snippet&, const Snippet&) = default;
};

/// Consecutive non-overlapping windows of `snippet_len` tokens; only the last
/// may be shorter. Throws std::invalid_argument when snippet_len == 0.
std::vector<Snippet> split_snippets(const std::vector<std::string>& tokens,
                                    std::size_t snippet_len = kDefaultSnippetLen);

}  // namespace osskg::fingerprint
