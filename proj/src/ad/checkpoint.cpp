#include "meclab/ad/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace meclab::ad {

namespace {

constexpr char kMagic[4] = {'M', 'E', 'C', 'K'};
constexpr std::uint8_t kVersion = 1;

template <typename T>
void write_raw(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path,
                     const std::vector<CheckpointRecord>& records) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
  os.write(kMagic, 4);
  write_raw<std::uint8_t>(os, kVersion);
  write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(records.size()));
  for (const auto& r : records) {
    if (r.name.size() > 0xffff) {
      throw std::invalid_argument("checkpoint: name too long: " + r.name);
    }
    write_raw<std::uint16_t>(os, static_cast<std::uint16_t>(r.name.size()));
    os.write(r.name.data(), static_cast<std::streamsize>(r.name.size()));
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(r.value.rows()));
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(r.value.cols()));
    os.write(reinterpret_cast<const char*>(r.value.data()),
             static_cast<std::streamsize>(r.value.size() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("checkpoint: write failed: " + path);
}

std::vector<CheckpointRecord> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("checkpoint: bad magic in " + path);
  }
  const auto version = read_raw<std::uint8_t>(is);
  if (version != kVersion) {
    throw std::runtime_error("checkpoint: unsupported version in " + path);
  }
  const auto count = read_raw<std::uint32_t>(is);
  std::vector<CheckpointRecord> records;
  records.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name_len = read_raw<std::uint16_t>(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    const auto rows = read_raw<std::uint32_t>(is);
    const auto cols = read_raw<std::uint32_t>(is);
    Tensor t(rows, cols);
    is.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!is) throw std::runtime_error("checkpoint: truncated file " + path);
    records.push_back({std::move(name), std::move(t)});
  }
  return records;
}

std::vector<CheckpointRecord> to_records(const ParamSet& params,
                                         const std::string& prefix) {
  std::vector<CheckpointRecord> out;
  out.reserve(params.size());
  for (const auto& e : params.entries()) {
    out.push_back({prefix + e.name, e.value});
  }
  return out;
}

void restore_params(ParamSet& params, const std::string& prefix,
                    const std::vector<CheckpointRecord>& records) {
  std::size_t restored = 0;
  for (const auto& r : records) {
    if (r.name.rfind(prefix, 0) != 0) continue;
    auto& e = params.entry(r.name.substr(prefix.size()));
    if (!e.value.same_shape(r.value)) {
      throw std::runtime_error("checkpoint: shape mismatch for " + r.name);
    }
    e.value = r.value;
    ++restored;
  }
  if (restored != params.size()) {
    throw std::runtime_error("checkpoint: missing records under prefix " +
                             prefix);
  }
}

}  // namespace meclab::ad
