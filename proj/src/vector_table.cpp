#include "patret/vector_table.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "patret/error.hpp"
#include "patret/tsv.hpp"

namespace patret {

void VectorTable::add(const std::string& key, const Vector& v) {
  if (index.count(key))
    fail(Errc::duplicate_key, "duplicate key '" + key + "'");
  if (vectors.rows() > 0 && v.size() != vectors.cols())
    fail(Errc::dim_mismatch, "vector for '" + key + "' has dim " +
                                 std::to_string(v.size()) + ", table has " +
                                 std::to_string(vectors.cols()));
  const Index row = static_cast<Index>(keys.size());
  keys.push_back(key);
  index.emplace(key, row);
  vectors.conservativeResize(row + 1, v.size());
  vectors.row(row) = v.transpose();
}

void VectorTable::rebuild_index() {
  index.clear();
  for (std::size_t i = 0; i < keys.size(); ++i)
    index.emplace(keys[i], static_cast<Index>(i));
}

VectorTable make_table(std::vector<std::string> keys, Matrix vectors) {
  if (static_cast<Index>(keys.size()) != vectors.rows())
    fail(Errc::dim_mismatch, "make_table: " + std::to_string(keys.size()) +
                                 " keys for " + std::to_string(vectors.rows()) +
                                 " rows");
  VectorTable table;
  table.keys = std::move(keys);
  table.vectors = std::move(vectors);
  table.rebuild_index();
  return table;
}

namespace {

constexpr char kMagic[4] = {'P', 'E', 'M', 'B'};
constexpr std::uint32_t kVersion = 1;

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  put_bytes(out, buf, sizeof(T));
}

void put_f32le(std::ostream& out, float value) {
  put_le(out, std::bit_cast<std::uint32_t>(value));
}

void get_bytes(std::istream& in, void* p, std::size_t n, const std::string& path) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    fail(Errc::io_error, "truncated embedding file " + path);
}

template <typename T>
T get_le(std::istream& in, const std::string& path) {
  unsigned char buf[sizeof(T)];
  get_bytes(in, buf, sizeof(T), path);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

float get_f32le(std::istream& in, const std::string& path) {
  return std::bit_cast<float>(get_le<std::uint32_t>(in, path));
}

}  // namespace

void save_table(const VectorTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
  put_bytes(out, kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(table.size()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(table.dim()));
  for (Index i = 0; i < table.size(); ++i) {
    const std::string& key = table.keys[static_cast<std::size_t>(i)];
    if (key.size() > 0xffff)
      fail(Errc::io_error, "key too long for format: " + key.substr(0, 32) + "...");
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(key.size()));
    put_bytes(out, key.data(), key.size());
    for (Index j = 0; j < table.dim(); ++j)
      put_f32le(out, static_cast<float>(table.vectors(i, j)));
  }
  if (!out) fail(Errc::io_error, "write failed for " + path);
}

VectorTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  char magic[4];
  get_bytes(in, magic, 4, path);
  if (std::memcmp(magic, kMagic, 4) != 0)
    fail(Errc::io_error, path + " is not an embedding file (bad magic)");
  const auto version = get_le<std::uint32_t>(in, path);
  if (version != kVersion)
    fail(Errc::io_error, path + ": unsupported format version " + std::to_string(version));
  const auto count = get_le<std::uint64_t>(in, path);
  const auto dim   = get_le<std::uint32_t>(in, path);

  VectorTable table;
  table.keys.reserve(count);
  table.vectors.resize(static_cast<Index>(count), static_cast<Index>(dim));
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto key_len = get_le<std::uint16_t>(in, path);
    std::string key(key_len, '\0');
    get_bytes(in, key.data(), key_len, path);
    if (table.index.count(key))
      fail(Errc::duplicate_key, path + ": duplicate key '" + key + "'");
    table.index.emplace(key, static_cast<Index>(i));
    table.keys.push_back(std::move(key));
    for (std::uint32_t j = 0; j < dim; ++j)
      table.vectors(static_cast<Index>(i), static_cast<Index>(j)) =
          static_cast<Real>(get_f32le(in, path));
  }
  return table;
}

void save_table_tsv(const VectorTable& table, const std::string& path) {
  auto out = open_output(path);
  char buf[32];
  for (Index i = 0; i < table.size(); ++i) {
    out << table.keys[static_cast<std::size_t>(i)] << '\t';
    for (Index j = 0; j < table.dim(); ++j) {
      // %.9g round-trips float32 exactly
      std::snprintf(buf, sizeof(buf), "%.9g", static_cast<float>(table.vectors(i, j)));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

VectorTable load_table_tsv(const std::string& path) {
  VectorTable table;
  for_each_line(path, [&](std::size_t lineno, const std::string& line) {
    if (line.empty()) return;
    const auto fields = split_tabs(line);
    if (fields.size() != 2)
      fail(Errc::malformed_row, path + ":" + std::to_string(lineno) +
                                    ": expected key<TAB>values");
    std::vector<Real> values;
    std::size_t start = 0;
    const std::string& payload = fields[1];
    while (start <= payload.size()) {
      const std::size_t pos = payload.find(',', start);
      const std::string tok = payload.substr(
          start, pos == std::string::npos ? std::string::npos : pos - start);
      try {
        values.push_back(static_cast<Real>(std::stof(tok)));
      } catch (const std::exception&) {
        fail(Errc::malformed_row,
             path + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    Vector v = Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
    if (table.size() > 0 && v.size() != table.dim())
      fail(Errc::dim_mismatch, path + ":" + std::to_string(lineno) +
                                   ": dim " + std::to_string(v.size()) +
                                   " != " + std::to_string(table.dim()));
    table.add(fields[0], v);
  });
  return table;
}

}  // namespace patret
