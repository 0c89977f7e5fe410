#include "raycut/nrrd.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "raycut/error.hpp"

namespace raycut {
namespace {

std::string trim(std::string_view s) {
  auto b = s.begin();
  auto e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string collapse_spaces(const std::string& s) {
  std::istringstream in(s);
  std::string word, out;
  while (in >> word) {
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

std::optional<ScalarKind> parse_type(const std::string& raw) {
  static const std::map<std::string, ScalarKind> kTypes = {
      {"uchar", ScalarKind::kUInt8},
      {"unsigned char", ScalarKind::kUInt8},
      {"uint8", ScalarKind::kUInt8},
      {"uint8_t", ScalarKind::kUInt8},
      {"short", ScalarKind::kInt16},
      {"short int", ScalarKind::kInt16},
      {"signed short", ScalarKind::kInt16},
      {"signed short int", ScalarKind::kInt16},
      {"int16", ScalarKind::kInt16},
      {"int16_t", ScalarKind::kInt16},
      {"ushort", ScalarKind::kUInt16},
      {"unsigned short", ScalarKind::kUInt16},
      {"unsigned short int", ScalarKind::kUInt16},
      {"uint16", ScalarKind::kUInt16},
      {"uint16_t", ScalarKind::kUInt16},
      {"int", ScalarKind::kInt32},
      {"signed int", ScalarKind::kInt32},
      {"int32", ScalarKind::kInt32},
      {"int32_t", ScalarKind::kInt32},
      {"float", ScalarKind::kFloat32},
      {"double", ScalarKind::kFloat64},
  };
  auto it = kTypes.find(lower(collapse_spaces(raw)));
  if (it == kTypes.end()) return std::nullopt;
  return it->second;
}

const char* type_name(ScalarKind kind) {
  switch (kind) {
    case ScalarKind::kUInt8: return "uchar";
    case ScalarKind::kInt16: return "short";
    case ScalarKind::kUInt16: return "ushort";
    case ScalarKind::kInt32: return "int";
    case ScalarKind::kFloat32: return "float";
    case ScalarKind::kFloat64: return "double";
  }
  return "double";
}

double parse_number(const std::string& token, const char* field) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw Error(Errc::kMalformedHeader,
                std::string("cannot parse number '") + token + "' in field '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  return {std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
}

// Parses "(a,b,c)" groups. Returns one vector per group.
std::vector<Vec3> parse_vectors(const std::string& value, const char* field) {
  std::vector<Vec3> out;
  std::size_t pos = 0;
  while (true) {
    pos = value.find_first_not_of(" \t", pos);
    if (pos == std::string::npos) break;
    if (value[pos] != '(') {
      throw Error(Errc::kMalformedHeader,
                  std::string("expected '(' in field '") + field + "' (got '" + value + "')");
    }
    const auto close = value.find(')', pos);
    if (close == std::string::npos) {
      throw Error(Errc::kMalformedHeader, std::string("unterminated vector in '") + field + "'");
    }
    std::string inner = value.substr(pos + 1, close - pos - 1);
    std::replace(inner.begin(), inner.end(), ',', ' ');
    const auto comps = split_words(inner);
    if (comps.size() != 3) {
      throw Error(Errc::kMalformedHeader,
                  std::string("vectors in '") + field + "' must have 3 components");
    }
    out.push_back({parse_number(comps[0], field), parse_number(comps[1], field),
                   parse_number(comps[2], field)});
    pos = close + 1;
  }
  return out;
}

std::string gunzip(std::string_view in) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) {
    throw Error(Errc::kIo, "zlib inflateInit2 failed");
  }
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  std::string out;
  char buf[1 << 16];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(Errc::kSizeMismatch, "gzip payload is truncated or corrupt");
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw Error(Errc::kSizeMismatch, "gzip payload is truncated");
    }
  }
  inflateEnd(&zs);
  return out;
}

std::string gzip(std::string_view in) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(Errc::kIo, "zlib deflateInit2 failed");
  }
  std::string out(deflateBound(&zs, static_cast<uLong>(in.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(Errc::kIo, "zlib deflate failed");
  out.resize(zs.total_out);
  return out;
}

template <typename T>
T load(const char* p, bool swap) {
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, p, sizeof(T));
  if (swap) std::reverse(raw, raw + sizeof(T));
  T v;
  std::memcpy(&v, raw, sizeof(T));
  return v;
}

std::vector<double> convert(std::string_view payload, ScalarKind kind, std::size_t n,
                            bool big_endian) {
  const bool swap = big_endian != (std::endian::native == std::endian::big);
  const std::size_t sz = scalar_size(kind);
  std::vector<double> out(n);
  const char* p = payload.data();
  for (std::size_t i = 0; i < n; ++i, p += sz) {
    switch (kind) {
      case ScalarKind::kUInt8: out[i] = static_cast<unsigned char>(*p); break;
      case ScalarKind::kInt16: out[i] = load<std::int16_t>(p, swap); break;
      case ScalarKind::kUInt16: out[i] = load<std::uint16_t>(p, swap); break;
      case ScalarKind::kInt32: out[i] = load<std::int32_t>(p, swap); break;
      case ScalarKind::kFloat32: out[i] = load<float>(p, swap); break;
      case ScalarKind::kFloat64: out[i] = load<double>(p, swap); break;
    }
    if (!std::isfinite(out[i])) {
      throw Error(Errc::kInvalidArgument, "NRRD payload contains NaN or Inf");
    }
  }
  return out;
}

template <typename T>
void store(std::string& out, T v) {
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.append(raw, sizeof(T));
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string header_for(const Geometry& g, const char* type, NrrdEncoding encoding) {
  std::string h = "NRRD0004\n";
  h += "# Complete NRRD file format specification at:\n";
  h += "# http://teem.sourceforge.net/nrrd/format.html\n";
  h += std::string("type: ") + type + "\n";
  h += "dimension: 3\n";
  h += "space dimension: 3\n";
  h += "sizes: " + std::to_string(g.dims[0]) + " " + std::to_string(g.dims[1]) + " " +
       std::to_string(g.dims[2]) + "\n";
  h += "space directions: (" + fmt_double(g.spacing.x) + ",0,0) (0," +
       fmt_double(g.spacing.y) + ",0) (0,0," + fmt_double(g.spacing.z) + ")\n";
  h += "kinds: domain domain domain\n";
  h += "endian: little\n";
  h += std::string("encoding: ") + (encoding == NrrdEncoding::kGzip ? "gzip" : "raw") + "\n";
  h += "space origin: (" + fmt_double(g.origin.x) + "," + fmt_double(g.origin.y) + "," +
       fmt_double(g.origin.z) + ")\n\n";
  return h;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.empty()) throw Error(Errc::kIo, "empty output path");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(Errc::kIo, "failed writing '" + path.string() + "'");
}

}  // namespace

Volume decode_nrrd(std::string_view bytes) {
  // Header ends at the first empty line.
  std::size_t header_end = std::string_view::npos;
  std::size_t payload_start = 0;
  for (std::size_t i = 0; i + 1 < bytes.size(); ++i) {
    if (bytes[i] != '\n') continue;
    if (bytes[i + 1] == '\n') {
      header_end = i;
      payload_start = i + 2;
      break;
    }
    if (bytes[i + 1] == '\r' && i + 2 < bytes.size() && bytes[i + 2] == '\n') {
      header_end = i;
      payload_start = i + 3;
      break;
    }
  }
  if (bytes.size() < 8 || bytes.substr(0, 7) != "NRRD000" || bytes[7] < '1' ||
      bytes[7] > '5') {
    throw Error(Errc::kMalformedHeader, "missing NRRD000[1-5] magic");
  }
  if (header_end == std::string_view::npos) {
    throw Error(Errc::kMalformedHeader, "header is not terminated by an empty line");
  }

  std::map<std::string, std::string> fields;
  std::istringstream lines{std::string(bytes.substr(0, header_end))};
  std::string line;
  std::getline(lines, line);  // magic
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.find(":=") != std::string::npos) continue;  // key/value pairs
    const auto colon = line.find(": ");
    if (colon == std::string::npos) {
      throw Error(Errc::kMalformedHeader, "malformed header line '" + line + "'");
    }
    fields[lower(trim(line.substr(0, colon)))] = trim(line.substr(colon + 2));
  }
  auto field = [&](std::initializer_list<const char*> names) -> const std::string* {
    for (const char* n : names) {
      auto it = fields.find(n);
      if (it != fields.end()) return &it->second;
    }
    return nullptr;
  };

  const std::string* dim = field({"dimension"});
  if (!dim) throw Error(Errc::kMalformedHeader, "missing 'dimension' field");
  if (parse_number(*dim, "dimension") != 3.0) {
    throw Error(Errc::kUnsupportedDimension, "only 3-dimensional volumes are supported (got " +
                                                 *dim + ")");
  }
  if (field({"data file", "datafile"})) {
    throw Error(Errc::kMalformedHeader, "detached data files are not supported");
  }

  const std::string* enc = field({"encoding"});
  if (!enc) throw Error(Errc::kMalformedHeader, "missing 'encoding' field");
  const std::string enc_l = lower(*enc);
  bool gz = false;
  if (enc_l == "gzip" || enc_l == "gz") {
    gz = true;
  } else if (enc_l != "raw") {
    throw Error(Errc::kUnsupportedEncoding, "unsupported encoding '" + *enc + "'");
  }

  const std::string* type = field({"type"});
  if (!type) throw Error(Errc::kMalformedHeader, "missing 'type' field");
  const auto kind = parse_type(*type);
  if (!kind) throw Error(Errc::kUnsupportedType, "unsupported type '" + *type + "'");

  for (const char* skip : {"byte skip", "byteskip", "line skip", "lineskip"}) {
    if (auto s = field({skip}); s && parse_number(*s, skip) != 0.0) {
      throw Error(Errc::kMalformedHeader, std::string("non-zero '") + skip +
                                              "' is not supported");
    }
  }

  const std::string* sizes = field({"sizes"});
  if (!sizes) throw Error(Errc::kMalformedHeader, "missing 'sizes' field");
  const auto size_words = split_words(*sizes);
  if (size_words.size() != 3) {
    throw Error(Errc::kMalformedHeader, "'sizes' must list 3 values");
  }
  Geometry g;
  for (int a = 0; a < 3; ++a) {
    const double s = parse_number(size_words[a], "sizes");
    if (s < 1 || s != std::floor(s)) {
      throw Error(Errc::kMalformedHeader, "'sizes' must be positive integers");
    }
    g.dims[a] = static_cast<std::size_t>(s);
  }

  if (const std::string* dirs = field({"space directions"})) {
    const auto vecs = parse_vectors(*dirs, "space directions");
    if (vecs.size() != 3) {
      throw Error(Errc::kMalformedHeader, "'space directions' must hold 3 vectors");
    }
    for (int a = 0; a < 3; ++a) {
      const double len = norm(vecs[a]);
      if (!(len > 0.0)) throw Error(Errc::kMalformedHeader, "zero-length space direction");
      for (int b = 0; b < 3; ++b) {
        if (b != a && std::abs(vecs[a][b]) > 1e-6 * len) {
          throw Error(Errc::kNonAxisAlignedDirections,
                      "space directions are not axis-aligned; rotated volumes are "
                      "not supported");
        }
      }
      g.spacing[a] = std::abs(vecs[a][a]);
    }
  } else if (const std::string* sp = field({"spacings"})) {
    const auto words = split_words(*sp);
    if (words.size() != 3) throw Error(Errc::kMalformedHeader, "'spacings' must list 3 values");
    for (int a = 0; a < 3; ++a) {
      g.spacing[a] = std::abs(parse_number(words[a], "spacings"));
      if (!(g.spacing[a] > 0.0)) {
        throw Error(Errc::kMalformedHeader, "'spacings' must be non-zero");
      }
    }
  } else {
    throw Error(Errc::kMalformedHeader, "no 'spacings' or 'space directions' field");
  }

  if (const std::string* org = field({"space origin"})) {
    const auto v = parse_vectors(*org, "space origin");
    if (v.size() != 1) throw Error(Errc::kMalformedHeader, "malformed 'space origin'");
    g.origin = v[0];
  }

  bool big_endian = false;
  if (const std::string* e = field({"endian"})) {
    const std::string el = lower(*e);
    if (el == "big") {
      big_endian = true;
    } else if (el != "little") {
      throw Error(Errc::kMalformedHeader, "unknown endian '" + *e + "'");
    }
  }

  const std::size_t n = g.voxel_count();
  const std::size_t expected = n * scalar_size(*kind);
  std::string_view payload = bytes.substr(payload_start);
  std::string inflated;
  if (gz) {
    inflated = gunzip(payload);
    payload = inflated;
  }
  if (payload.size() != expected) {
    throw Error(Errc::kSizeMismatch, "payload holds " + std::to_string(payload.size()) +
                                         " bytes, expected " + std::to_string(expected));
  }
  return Volume(g, convert(payload, *kind, n, big_endian), *kind);
}

Volume read_nrrd(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::kIo, "failed reading '" + path.string() + "'");
  return decode_nrrd(bytes);
}

std::string encode_nrrd(const Volume& vol, NrrdEncoding encoding) {
  std::string payload;
  payload.reserve(vol.data().size() * scalar_size(vol.scalar_kind()));
  for (double v : vol.data()) {
    switch (vol.scalar_kind()) {
      case ScalarKind::kUInt8: payload.push_back(static_cast<char>(static_cast<std::uint8_t>(v))); break;
      case ScalarKind::kInt16: store(payload, static_cast<std::int16_t>(v)); break;
      case ScalarKind::kUInt16: store(payload, static_cast<std::uint16_t>(v)); break;
      case ScalarKind::kInt32: store(payload, static_cast<std::int32_t>(v)); break;
      case ScalarKind::kFloat32: store(payload, static_cast<float>(v)); break;
      case ScalarKind::kFloat64: store(payload, v); break;
    }
  }
  std::string out = header_for(vol.geometry(), type_name(vol.scalar_kind()), encoding);
  out += encoding == NrrdEncoding::kGzip ? gzip(payload) : payload;
  return out;
}

std::string encode_nrrd_mask(const MaskVolume& mask, NrrdEncoding encoding) {
  std::string payload(mask.data().begin(), mask.data().end());
  std::string out = header_for(mask.geometry(), "uchar", encoding);
  out += encoding == NrrdEncoding::kGzip ? gzip(payload) : payload;
  return out;
}

void write_nrrd(const Volume& vol, const std::filesystem::path& path, NrrdEncoding encoding) {
  write_file(path, encode_nrrd(vol, encoding));
}

void write_nrrd_mask(const MaskVolume& mask, const std::filesystem::path& path,
                     NrrdEncoding encoding) {
  write_file(path, encode_nrrd_mask(mask, encoding));
}

MaskVolume read_nrrd_mask(const std::filesystem::path& path) {
  const Volume v = read_nrrd(path);
  std::vector<std::uint8_t> bits(v.data().size());
  std::transform(v.data().begin(), v.data().end(), bits.begin(),
                 [](double x) { return static_cast<std::uint8_t>(x != 0.0 ? 1 : 0); });
  return MaskVolume(v.geometry(), std::move(bits));
}

}  // namespace raycut
