#include "osskg/corpus/archive.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "osskg/util/error.hpp"

namespace fs = std::filesystem;

namespace osskg::corpus {
namespace {

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorKind::corrupt_archive, why); }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::uint32_t le32(std::string_view b, std::size_t pos) {
  if (pos + 4 > b.size()) corrupt("truncated zip structure");
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 3])) << 24;
}

std::uint16_t le16(std::string_view b, std::size_t pos) {
  if (pos + 2 > b.size()) corrupt("truncated zip structure");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[pos]) |
                                    static_cast<unsigned char>(b[pos + 1]) << 8);
}

void check_budget(std::uint64_t total, std::size_t entries, const UnpackLimits& limits) {
  if (total > limits.max_total_bytes) corrupt("archive expands beyond the size limit");
  if (entries > limits.max_entries) corrupt("archive has too many entries");
}

// Inflates a raw deflate (window_bits < 0) or gzip (window_bits = 16 + 15) stream.
std::string inflate_stream(std::string_view in, int window_bits, std::uint64_t max_out,
                           bool allow_concatenated) {
  z_stream zs{};
  if (inflateInit2(&zs, window_bits) != Z_OK) corrupt("zlib init failed");
  std::string out;
  std::array<char, 64 * 1024> buf{};
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  int rc = Z_OK;
  for (;;) {
    zs.next_out = reinterpret_cast<Bytef*>(buf.data());
    zs.avail_out = static_cast<uInt>(buf.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      corrupt(std::string("compressed stream error: ") + (zs.msg ? zs.msg : "unknown"));
    }
    out.append(buf.data(), buf.size() - zs.avail_out);
    if (out.size() > max_out) {
      inflateEnd(&zs);
      corrupt("archive expands beyond the size limit");
    }
    if (rc == Z_STREAM_END) {
      if (allow_concatenated && zs.avail_in >= 2 && zs.next_in[0] == 0x1f && zs.next_in[1] == 0x8b) {
        inflateReset(&zs);
        continue;
      }
      break;
    }
    if (zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      corrupt("truncated compressed stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

std::uint64_t parse_tar_number(const char* field, std::size_t len) {
  if (static_cast<unsigned char>(field[0]) & 0x80) {  // GNU base-256
    std::uint64_t v = static_cast<unsigned char>(field[0]) & 0x7f;
    for (std::size_t i = 1; i < len; ++i) v = (v << 8) | static_cast<unsigned char>(field[i]);
    return v;
  }
  std::uint64_t v = 0;
  std::size_t i = 0;
  while (i < len && (field[i] == ' ' || field[i] == '\0')) ++i;
  for (; i < len && field[i] >= '0' && field[i] <= '7'; ++i) v = v * 8 + (field[i] - '0');
  for (; i < len; ++i) {
    if (field[i] != ' ' && field[i] != '\0') corrupt("bad octal field in tar header");
  }
  return v;
}

std::string c_field(const char* p, std::size_t len) {
  return std::string(p, strnlen(p, len));
}

// Extracts "path" from a pax extended header payload.
std::optional<std::string> pax_path(std::string_view payload) {
  std::size_t pos = 0;
  std::optional<std::string> path;
  while (pos < payload.size()) {
    std::size_t space = payload.find(' ', pos);
    if (space == std::string_view::npos) break;
    std::size_t len = 0;
    for (std::size_t i = pos; i < space; ++i) {
      if (payload[i] < '0' || payload[i] > '9') corrupt("bad pax record");
      len = len * 10 + (payload[i] - '0');
    }
    if (len == 0 || pos + len > payload.size()) corrupt("bad pax record length");
    std::string_view rec = payload.substr(space + 1, pos + len - space - 1);
    if (!rec.empty() && rec.back() == '\n') rec.remove_suffix(1);
    if (rec.starts_with("path=")) path = std::string(rec.substr(5));
    pos += len;
  }
  return path;
}

void write_octal(char* field, std::size_t len, std::uint64_t value) {
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + (value & 7)));
    value >>= 3;
  } while (value);
  if (digits.size() > len - 1) throw Error(ErrorKind::io, "value too large for tar header");
  std::string padded(len - 1 - digits.size(), '0');
  padded += digits;
  std::memcpy(field, padded.data(), len - 1);
  field[len - 1] = '\0';
}

void write_entries(const std::vector<ArchiveEntry>& entries, const fs::path& dest) {
  for (const auto& e : entries) {
    const std::string rel = normalize_entry_path(e.path);
    if (rel.empty()) continue;
    const fs::path target = dest / fs::path(rel);
    std::error_code ec;
    if (e.directory) {
      fs::create_directories(target, ec);
      if (ec) corrupt("cannot create directory " + rel + ": " + ec.message());
      continue;
    }
    fs::create_directories(target.parent_path(), ec);
    if (ec) corrupt("cannot create directory for " + rel + ": " + ec.message());
    if (fs::is_directory(target)) corrupt("entry collides with a directory: " + rel);
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    out.write(e.data.data(), static_cast<std::streamsize>(e.data.size()));
    if (!out) throw Error(ErrorKind::io, "cannot write " + target.string());
  }
}

}  // namespace

std::optional<ArchiveFormat> detect_format(const fs::path& path) {
  const std::string name = lower(path.filename().string());
  if (ends_with(name, ".tar.gz") || ends_with(name, ".tgz")) return ArchiveFormat::tar_gz;
  if (ends_with(name, ".tar")) return ArchiveFormat::tar;
  if (ends_with(name, ".zip") || ends_with(name, ".whl")) return ArchiveFormat::zip;
  if (ends_with(name, ".gem")) return ArchiveFormat::gem;
  return std::nullopt;
}

ScratchDir ScratchDir::create(std::string_view prefix) {
  std::string pattern = (fs::temp_directory_path() / (std::string(prefix) + "-XXXXXX")).string();
  if (!mkdtemp(pattern.data())) throw Error(ErrorKind::io, "cannot create scratch directory");
  return ScratchDir(fs::path(pattern));
}

ScratchDir::ScratchDir(ScratchDir&& other) noexcept : path_(std::move(other.path_)) {
  other.path_.clear();
}

ScratchDir& ScratchDir::operator=(ScratchDir&& other) noexcept {
  if (this != &other) {
    release();
    path_ = std::move(other.path_);
    other.path_.clear();
  }
  return *this;
}

ScratchDir::~ScratchDir() { release(); }

void ScratchDir::release() noexcept {
  if (path_.empty()) return;
  std::error_code ec;
  fs::remove_all(path_, ec);
  path_.clear();
}

std::string normalize_entry_path(std::string_view raw) {
  std::string s(raw);
  std::replace(s.begin(), s.end(), '\\', '/');
  if (s.starts_with('/')) throw Error(ErrorKind::path_traversal, "absolute entry path: " + s);
  if (s.size() >= 2 && std::isalpha(static_cast<unsigned char>(s[0])) && s[1] == ':') {
    throw Error(ErrorKind::path_traversal, "drive-qualified entry path: " + s);
  }
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t slash = s.find('/', pos);
    if (slash == std::string::npos) slash = s.size();
    std::string part = s.substr(pos, slash - pos);
    pos = slash + 1;
    if (part.empty() || part == ".") continue;
    if (part == ".." && !parts.empty() && parts.back() != "..") {
      parts.pop_back();
    } else {
      parts.push_back(std::move(part));
    }
  }
  std::string out;
  for (const auto& p : parts) {
    if (p == "..") throw Error(ErrorKind::path_traversal, "entry escapes extraction root: " + s);
    if (!out.empty()) out += '/';
    out += p;
  }
  return out;
}

std::string gunzip(std::string_view compressed, const UnpackLimits& limits) {
  if (compressed.size() < 18 || static_cast<unsigned char>(compressed[0]) != 0x1f ||
      static_cast<unsigned char>(compressed[1]) != 0x8b) {
    corrupt("not a gzip stream");
  }
  return inflate_stream(compressed, 16 + MAX_WBITS, limits.max_total_bytes, true);
}

std::string gzip(std::string_view data) {
  z_stream zs{};
  if (deflateInit2(&zs, 9, Z_DEFLATED, 16 + MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorKind::io, "zlib init failed");
  }
  gz_header header{};
  header.os = 255;
  deflateSetHeader(&zs, &header);
  std::string out;
  std::array<char, 64 * 1024> buf{};
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  int rc = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf.data());
    zs.avail_out = static_cast<uInt>(buf.size());
    rc = deflate(&zs, Z_FINISH);
    out.append(buf.data(), buf.size() - zs.avail_out);
  } while (rc == Z_OK);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorKind::io, "gzip compression failed");
  return out;
}

std::vector<ArchiveEntry> read_tar(std::string_view bytes, const UnpackLimits& limits) {
  std::vector<ArchiveEntry> entries;
  std::uint64_t total = 0;
  std::optional<std::string> long_name;
  std::size_t pos = 0;
  while (pos + 512 <= bytes.size()) {
    const char* h = bytes.data() + pos;
    if (std::all_of(h, h + 512, [](char c) { return c == '\0'; })) break;

    unsigned stored = static_cast<unsigned>(parse_tar_number(h + 148, 8));
    unsigned sum = 0;
    for (int i = 0; i < 512; ++i) {
      sum += (i >= 148 && i < 156) ? ' ' : static_cast<unsigned char>(h[i]);
    }
    if (sum != stored) corrupt("tar header checksum mismatch at offset " + std::to_string(pos));

    const std::uint64_t size = parse_tar_number(h + 124, 12);
    const char type = h[156];
    const std::size_t data_pos = pos + 512;
    if (data_pos + size > bytes.size()) corrupt("truncated tar entry");
    std::string_view payload = bytes.substr(data_pos, size);
    pos = data_pos + ((size + 511) / 512) * 512;

    std::string name = c_field(h, 100);
    if (std::memcmp(h + 257, "ustar\0", 6) == 0) {  // POSIX ustar, not GNU
      std::string prefix = c_field(h + 345, 155);
      if (!prefix.empty()) name = prefix + "/" + name;
    }

    if (type == 'L') {  // GNU long name for the next entry
      long_name = c_field(payload.data(), payload.size());
      continue;
    }
    if (type == 'x') {
      if (auto p = pax_path(payload)) long_name = *p;
      continue;
    }
    if (type == 'g' || type == 'K') continue;
    if (long_name) {
      name = *long_name;
      long_name.reset();
    }
    if (type == '5') {
      entries.push_back({name, {}, true});
    } else if (type == '0' || type == '\0' || type == '7') {
      total += size;
      entries.push_back({name, std::string(payload), false});
    } else {
      continue;  // links, devices, fifos
    }
    check_budget(total, entries.size(), limits);
  }
  if (pos < bytes.size() && pos + 512 > bytes.size() &&
      !std::all_of(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end(),
                   [](char c) { return c == '\0'; })) {
    corrupt("trailing garbage after tar entries");
  }
  return entries;
}

std::vector<ArchiveEntry> read_zip(std::string_view b, const UnpackLimits& limits) {
  constexpr std::uint32_t kEocd = 0x06054b50, kCentral = 0x02014b50, kLocal = 0x04034b50;
  if (b.size() < 22) corrupt("zip too small");
  std::size_t eocd = std::string_view::npos;
  const std::size_t lowest = b.size() > 22 + 65535 ? b.size() - 22 - 65535 : 0;
  for (std::size_t p = b.size() - 22 + 1; p-- > lowest;) {
    if (le32(b, p) == kEocd) {
      eocd = p;
      break;
    }
  }
  if (eocd == std::string_view::npos) corrupt("zip end-of-central-directory not found");
  const std::uint16_t count = le16(b, eocd + 10);
  const std::uint32_t cd_offset = le32(b, eocd + 16);
  if (cd_offset == 0xffffffffu || count == 0xffff) corrupt("zip64 archives are not supported");

  std::vector<ArchiveEntry> entries;
  std::uint64_t total = 0;
  std::size_t p = cd_offset;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (le32(b, p) != kCentral) corrupt("bad zip central directory entry");
    const std::uint16_t flags = le16(b, p + 8);
    const std::uint16_t method = le16(b, p + 10);
    const std::uint32_t crc = le32(b, p + 16);
    const std::uint32_t csize = le32(b, p + 20);
    const std::uint32_t usize = le32(b, p + 24);
    const std::uint16_t name_len = le16(b, p + 28);
    const std::uint16_t extra_len = le16(b, p + 30);
    const std::uint16_t comment_len = le16(b, p + 32);
    const std::uint32_t local = le32(b, p + 42);
    if (p + 46 + name_len > b.size()) corrupt("truncated zip central directory");
    std::string name(b.substr(p + 46, name_len));
    p += 46 + name_len + extra_len + comment_len;

    if (flags & 1) corrupt("encrypted zip entries are not supported: " + name);
    if (le32(b, local) != kLocal) corrupt("bad zip local header for " + name);
    const std::size_t data_pos = local + 30 + le16(b, local + 26) + le16(b, local + 28);
    if (data_pos + csize > b.size()) corrupt("truncated zip entry " + name);
    std::string_view packed = b.substr(data_pos, csize);

    if (!name.empty() && (name.back() == '/' || name.back() == '\\')) {
      entries.push_back({name, {}, true});
      continue;
    }
    total += usize;
    check_budget(total, entries.size() + 1, limits);
    std::string data;
    if (method == 0) {
      data = std::string(packed);
    } else if (method == 8) {
      data = inflate_stream(packed, -MAX_WBITS, usize, false);
    } else {
      corrupt("unsupported zip compression method " + std::to_string(method) + " for " + name);
    }
    if (data.size() != usize) corrupt("zip entry size mismatch for " + name);
    const auto actual = crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
                              static_cast<uInt>(data.size()));
    if (actual != crc) corrupt("zip CRC mismatch for " + name);
    entries.push_back({std::move(name), std::move(data), false});
  }
  return entries;
}

std::string write_tar(const std::vector<ArchiveEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    std::array<char, 512> h{};
    std::string name = e.path;
    if (e.directory && !name.ends_with('/')) name += '/';
    if (name.size() > 100) {
      // GNU long-name record precedes the real header.
      ArchiveEntry ln{"././@LongLink", name + '\0', false};
      std::array<char, 512> lh{};
      std::memcpy(lh.data(), ln.path.data(), ln.path.size());
      write_octal(lh.data() + 100, 8, 0644);
      write_octal(lh.data() + 108, 8, 0);
      write_octal(lh.data() + 116, 8, 0);
      write_octal(lh.data() + 124, 12, ln.data.size());
      write_octal(lh.data() + 136, 12, 0);
      lh[156] = 'L';
      std::memcpy(lh.data() + 257, "ustar  ", 8);
      std::memset(lh.data() + 148, ' ', 8);
      unsigned sum = 0;
      for (char c : lh) sum += static_cast<unsigned char>(c);
      write_octal(lh.data() + 148, 7, sum);
      lh[155] = ' ';
      out.append(lh.data(), lh.size());
      out += ln.data;
      out.append((512 - ln.data.size() % 512) % 512, '\0');
    }
    std::memcpy(h.data(), name.data(), std::min<std::size_t>(name.size(), 100));
    write_octal(h.data() + 100, 8, e.directory ? 0755 : 0644);
    write_octal(h.data() + 108, 8, 0);
    write_octal(h.data() + 116, 8, 0);
    write_octal(h.data() + 124, 12, e.directory ? 0 : e.data.size());
    write_octal(h.data() + 136, 12, 0);
    h[156] = e.directory ? '5' : '0';
    std::memcpy(h.data() + 257, "ustar", 6);
    std::memcpy(h.data() + 263, "00", 2);
    std::memset(h.data() + 148, ' ', 8);
    unsigned sum = 0;
    for (char c : h) sum += static_cast<unsigned char>(c);
    write_octal(h.data() + 148, 7, sum);
    h[155] = ' ';
    out.append(h.data(), h.size());
    if (!e.directory) {
      out += e.data;
      out.append((512 - e.data.size() % 512) % 512, '\0');
    }
  }
  out.append(1024, '\0');
  return out;
}

std::string read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t unpack_archive_into(const fs::path& archive, const fs::path& dest,
                                const UnpackLimits& limits) {
  const auto format = detect_format(archive);
  if (!format) {
    throw Error(ErrorKind::unsupported_archive, "unsupported archive container: " + archive.string());
  }
  const std::string bytes = read_file_bytes(archive);
  std::vector<ArchiveEntry> entries;
  switch (*format) {
    case ArchiveFormat::tar_gz: entries = read_tar(gunzip(bytes, limits), limits); break;
    case ArchiveFormat::tar: entries = read_tar(bytes, limits); break;
    case ArchiveFormat::zip: entries = read_zip(bytes, limits); break;
    case ArchiveFormat::gem: {
      const auto outer = read_tar(bytes, limits);
      const ArchiveEntry* data = nullptr;
      const ArchiveEntry* meta = nullptr;
      for (const auto& e : outer) {
        if (e.directory) continue;
        const std::string n = normalize_entry_path(e.path);
        if (n == "data.tar.gz") data = &e;
        if (n == "metadata.gz") meta = &e;
      }
      if (!data) corrupt("gem without data.tar.gz: " + archive.string());
      entries = read_tar(gunzip(data->data, limits), limits);
      if (meta) entries.push_back({std::string(kGemMetadataFile), gunzip(meta->data, limits), false});
      break;
    }
  }
  // Validate every name before touching the filesystem so a traversal entry
  // aborts the package without leaving a partial tree behind.
  for (const auto& e : entries) normalize_entry_path(e.path);
  write_entries(entries, dest);
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const ArchiveEntry& e) { return !e.directory; }));
}

ScratchDir unpack_archive(const fs::path& archive, const UnpackLimits& limits) {
  auto scratch = ScratchDir::create("osskg-unpack");
  unpack_archive_into(archive, scratch.path(), limits);
  return scratch;
}

}  // namespace osskg::corpus
