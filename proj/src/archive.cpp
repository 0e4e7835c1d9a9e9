#include "dfuse/archive.h"

#include <fstream>
#include <stdexcept>

namespace dfuse {

namespace {
constexpr uint32_t kMagic = 0x44464152;  // "DFAR"

template <typename T>
void write_raw(std::ofstream& out, const T* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), count * sizeof(T));
}

template <typename T>
void read_raw(std::ifstream& in, T* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data), count * sizeof(T));
}
}  // namespace

void ArrayArchive::put_doubles(const std::string& name, std::vector<double> data,
                               std::vector<uint64_t> dims) {
  Entry e;
  e.dtype = 0;
  e.dims = std::move(dims);
  e.d = std::move(data);
  entries_[name] = std::move(e);
}

void ArrayArchive::put_ints(const std::string& name, std::vector<int32_t> data,
                            std::vector<uint64_t> dims) {
  Entry e;
  e.dtype = 1;
  e.dims = std::move(dims);
  e.i = std::move(data);
  entries_[name] = std::move(e);
}

void ArrayArchive::put_bytes(const std::string& name, std::vector<uint8_t> data,
                             std::vector<uint64_t> dims) {
  Entry e;
  e.dtype = 2;
  e.dims = std::move(dims);
  e.b = std::move(data);
  entries_[name] = std::move(e);
}

const ArrayArchive::Entry& ArrayArchive::fetch(const std::string& name, uint8_t dtype) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::runtime_error("archive: missing array " + name);
  if (it->second.dtype != dtype) throw std::runtime_error("archive: wrong dtype for " + name);
  return it->second;
}

const std::vector<double>& ArrayArchive::doubles(const std::string& name) const {
  return fetch(name, 0).d;
}
const std::vector<int32_t>& ArrayArchive::ints(const std::string& name) const {
  return fetch(name, 1).i;
}
const std::vector<uint8_t>& ArrayArchive::bytes(const std::string& name) const {
  return fetch(name, 2).b;
}
const std::vector<uint64_t>& ArrayArchive::dims(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::runtime_error("archive: missing array " + name);
  return it->second.dims;
}

void ArrayArchive::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  write_raw(out, &kMagic, 1);
  const uint32_t count = static_cast<uint32_t>(entries_.size());
  write_raw(out, &count, 1);
  for (const auto& [name, e] : entries_) {
    const uint16_t len = static_cast<uint16_t>(name.size());
    write_raw(out, &len, 1);
    out.write(name.data(), len);
    write_raw(out, &e.dtype, 1);
    const uint8_t nd = static_cast<uint8_t>(e.dims.size());
    write_raw(out, &nd, 1);
    write_raw(out, e.dims.data(), e.dims.size());
    switch (e.dtype) {
      case 0: write_raw(out, e.d.data(), e.d.size()); break;
      case 1: write_raw(out, e.i.data(), e.i.size()); break;
      default: write_raw(out, e.b.data(), e.b.size()); break;
    }
  }
}

ArrayArchive ArrayArchive::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  uint32_t magic = 0, count = 0;
  read_raw(in, &magic, 1);
  if (magic != kMagic) throw std::runtime_error("not an array archive: " + path);
  read_raw(in, &count, 1);
  ArrayArchive arc;
  for (uint32_t n = 0; n < count; ++n) {
    uint16_t len = 0;
    read_raw(in, &len, 1);
    std::string name(len, '\0');
    in.read(name.data(), len);
    Entry e;
    read_raw(in, &e.dtype, 1);
    uint8_t nd = 0;
    read_raw(in, &nd, 1);
    e.dims.resize(nd);
    read_raw(in, e.dims.data(), nd);
    uint64_t total = 1;
    for (uint64_t d : e.dims) total *= d;
    switch (e.dtype) {
      case 0: e.d.resize(total); read_raw(in, e.d.data(), total); break;
      case 1: e.i.resize(total); read_raw(in, e.i.data(), total); break;
      case 2: e.b.resize(total); read_raw(in, e.b.data(), total); break;
      default: throw std::runtime_error("archive: unknown dtype in " + path);
    }
    if (!in) throw std::runtime_error("truncated archive: " + path);
    arc.entries_[name] = std::move(e);
  }
  return arc;
}

}  // namespace dfuse
