#include "osskg/edges/ioc.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace osskg::edges {
namespace {

constexpr std::array<std::string_view, 24> kSecondLevelSuffixes = {
    "co.uk", "org.uk", "ac.uk", "gov.uk", "com.cn", "net.cn", "org.cn", "com.au",
    "net.au", "org.au", "co.jp",  "ne.jp",  "or.jp", "co.kr", "com.br", "com.tr",
    "co.in", "co.nz",  "com.mx", "com.tw", "com.hk", "com.sg", "co.za", "com.ru"};

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
bool is_alnum(char c) noexcept { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) noexcept { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim_url_tail(std::string_view url) {
  constexpr std::string_view kTrailing = ".,;:!?)]}>'\"`";
  while (!url.empty() && kTrailing.find(url.back()) != std::string_view::npos) url.remove_suffix(1);
  return url;
}

void collect_ips(std::string_view text, std::set<reports::IoC>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i]) || (i > 0 && (is_alnum(text[i - 1]) || text[i - 1] == '.'))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && (is_digit(text[j]) || text[j] == '.')) ++j;
    std::string_view run = text.substr(i, j - i);
    const bool glued = j < text.size() && is_alnum(text[j]);
    while (!run.empty() && run.back() == '.') run.remove_suffix(1);
    if (!glued && is_ipv4(run)) out.insert({reports::IoCKind::ip, std::string(run), std::nullopt});
    i = j;
  }
}

void collect_urls(std::string_view text, std::set<reports::IoC>& out) {
  const std::string low = lower(text);
  std::size_t pos = 0;
  while ((pos = low.find("http", pos)) != std::string::npos) {
    std::size_t after = pos + 4;
    if (after < low.size() && low[after] == 's') ++after;
    if (low.compare(after, 3, "://") != 0) {
      pos += 4;
      continue;
    }
    std::size_t end = after + 3;
    while (end < text.size() && !is_space(text[end])) ++end;
    const std::string_view url = trim_url_tail(text.substr(pos, end - pos));
    if (auto host = url_host(url); host && !host->empty()) {
      out.insert({reports::IoCKind::url, std::string(url), registrable_domain(*host)});
    }
    pos = end;
  }
}

bool powershell_line(std::string_view line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) {
      std::string t = lower(line.substr(i, j - i));
      const auto trim = t.find_last_not_of("\"'`;,");
      t = trim == std::string::npos ? std::string{} : t.substr(0, trim + 1);
      t.erase(0, std::min(t.size(), t.find_first_not_of("\"'`(")));
      tokens.push_back(std::move(t));
    }
    i = j;
  }
  for (const auto& t : tokens) {
    if (t == "-enc" || t == "-ec" || t == "-encodedcommand" || t == "/enc") return true;
  }
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    std::string_view t = tokens[k];
    if (const auto slash = t.find_last_of("\\/"); slash != std::string_view::npos) t = t.substr(slash + 1);
    const bool shell = t == "powershell" || t == "powershell.exe" || t == "pwsh" || t == "pwsh.exe";
    if (!shell) continue;
    for (std::size_t m = k + 1; m < tokens.size(); ++m) {
      if (tokens[m].size() > 1 && tokens[m][0] == '-') return true;
    }
  }
  return false;
}

void collect_powershell(std::string_view text, std::set<reports::IoC>& out) {
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
    while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
    if (!line.empty() && powershell_line(line)) {
      out.insert({reports::IoCKind::powershell, std::string(line), std::nullopt});
    }
    start = nl + 1;
  }
}

}  // namespace

bool is_ipv4(std::string_view text) noexcept {
  int parts = 0;
  std::size_t i = 0;
  while (true) {
    std::size_t j = i;
    int value = 0;
    while (j < text.size() && is_digit(text[j]) && j - i < 4) value = value * 10 + (text[j++] - '0');
    const std::size_t len = j - i;
    if (len == 0 || len > 3 || value > 255) return false;
    ++parts;
    if (j == text.size()) return parts == 4;
    if (text[j] != '.' || parts == 4) return false;
    i = j + 1;
  }
}

std::optional<std::string> url_host(std::string_view url) {
  const auto scheme = url.find("://");
  if (scheme == std::string_view::npos) return std::nullopt;
  const std::string s = lower(url.substr(0, scheme));
  if (s != "http" && s != "https") return std::nullopt;
  std::string_view rest = url.substr(scheme + 3);
  rest = rest.substr(0, rest.find_first_of("/?#\\"));
  if (const auto at = rest.rfind('@'); at != std::string_view::npos) rest = rest.substr(at + 1);
  if (const auto colon = rest.find(':'); colon != std::string_view::npos) rest = rest.substr(0, colon);
  while (!rest.empty() && rest.back() == '.') rest.remove_suffix(1);
  return lower(rest);
}

std::string registrable_domain(std::string_view host) {
  if (is_ipv4(host)) return std::string(host);
  std::vector<std::string_view> labels;
  std::size_t start = 0;
  while (true) {
    const auto dot = host.find('.', start);
    labels.push_back(host.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  auto tail = [&](std::size_t n) {
    std::string out;
    for (std::size_t i = labels.size() - n; i < labels.size(); ++i) {
      if (!out.empty()) out += '.';
      out += labels[i];
    }
    return out;
  };
  if (labels.size() <= 2) return std::string(host);
  const std::string last_two = tail(2);
  const bool multi = std::find(kSecondLevelSuffixes.begin(), kSecondLevelSuffixes.end(), last_two) !=
                     kSecondLevelSuffixes.end();
  return tail(multi ? 3 : 2);
}

std::vector<reports::IoC> extract_iocs(std::string_view text) {
  std::set<reports::IoC> found;
  collect_ips(text, found);
  collect_urls(text, found);
  collect_powershell(text, found);
  return {found.begin(), found.end()};
}

}  // namespace osskg::edges
