#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dfuse {

/// Little-endian container of named arrays: doubles, int32s or bytes, each
/// with explicit dimensions. Backing store for model files, volume
/// snapshots and pipeline state.
class ArrayArchive {
 public:
  void put_doubles(const std::string& name, std::vector<double> data,
                   std::vector<uint64_t> dims);
  void put_ints(const std::string& name, std::vector<int32_t> data, std::vector<uint64_t> dims);
  void put_bytes(const std::string& name, std::vector<uint8_t> data, std::vector<uint64_t> dims);

  bool has(const std::string& name) const { return entries_.count(name) > 0; }
  const std::vector<double>& doubles(const std::string& name) const;
  const std::vector<int32_t>& ints(const std::string& name) const;
  const std::vector<uint8_t>& bytes(const std::string& name) const;
  const std::vector<uint64_t>& dims(const std::string& name) const;

  void save(const std::string& path) const;
  static ArrayArchive load(const std::string& path);

 private:
  struct Entry {
    uint8_t dtype;  // 0 doubles, 1 int32, 2 bytes
    std::vector<uint64_t> dims;
    std::vector<double> d;
    std::vector<int32_t> i;
    std::vector<uint8_t> b;
  };
  const Entry& fetch(const std::string& name, uint8_t dtype) const;
  std::map<std::string, Entry> entries_;
};

}  // namespace dfuse
