#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osskg/reports/report.hpp"

namespace osskg::edges {

/// True for a dotted quad whose four octets are 1-3 digits in 0..255.
bool is_ipv4(std::string_view text) noexcept;

/// Host part of an http(s) URL, lowercased, without userinfo or port.
std::optional<std::string> url_host(std::string_view url);

/// Last two labels of the host, or three when the last two form a common
/// second-level public suffix (co.uk, com.cn, ...). IPv4 hosts are returned
/// unchanged.
std::string registrable_domain(std::string_view host);

/// IPv4 addresses, http(s) URLs (up to whitespace, trailing punctuation
/// trimmed) and PowerShell command lines. A line counts as PowerShell when it
/// invokes powershell/pwsh followed by a dash flag, or carries an
/// -enc/-ec/-encodedcommand flag. Unique; ordered by kind, then value.
std::vector<reports::IoC> extract_iocs(std::string_view text);

}  // namespace osskg::edges
