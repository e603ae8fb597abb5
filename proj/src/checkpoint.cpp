#include "tnsym/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tnsym {

static_assert(std::endian::native == std::endian::little,
              "checkpoint io assumes a little-endian host");

void write_tensor_record(std::ostream& os, const std::string& name, const Tensor& t) {
  os << "tnsym-tensor v1\n";
  os << "name " << (name.empty() ? "unnamed" : name) << "\n";
  os << "rank " << t.rank() << "\n";
  os << "dims";
  for (auto d : t.dims()) os << " " << d;
  os << "\n";
  os << "count " << t.size() << "\n";
  os << "endian little\n";
  os << "data\n";
  os.write(reinterpret_cast<const char*>(t.data().data()),
           static_cast<std::streamsize>(t.size() * 2 * sizeof(double)));
}

Tensor read_tensor_record(std::istream& is, std::string& name) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("checkpoint: truncated header");
  if (line != "tnsym-tensor v1") {
    if (line.rfind("tnsym-tensor", 0) == 0)
      throw std::runtime_error("checkpoint: unsupported version: " + line);
    throw std::runtime_error("checkpoint: malformed header (bad magic)");
  }
  std::size_t rank = 0, count = 0;
  std::vector<std::size_t> dims;
  bool have_rank = false, have_count = false, have_endian = false;
  name.clear();
  while (std::getline(is, line)) {
    if (line == "data") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "name") {
      ls >> name;
    } else if (key == "rank") {
      ls >> rank;
      have_rank = true;
    } else if (key == "dims") {
      std::size_t d;
      while (ls >> d) dims.push_back(d);
    } else if (key == "count") {
      ls >> count;
      have_count = true;
    } else if (key == "endian") {
      std::string e;
      ls >> e;
      if (e != "little") throw std::runtime_error("checkpoint: unsupported endianness tag");
      have_endian = true;
    } else {
      throw std::runtime_error("checkpoint: malformed header field: " + key);
    }
  }
  if (!have_rank || !have_count || !have_endian || dims.size() != rank)
    throw std::runtime_error("checkpoint: incomplete header");
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  if (n != count) throw std::runtime_error("checkpoint: element count disagrees with dims");
  std::vector<cdbl> data(count);
  is.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(count * 2 * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != count * 2 * sizeof(double))
    throw std::runtime_error("checkpoint: truncated data block");
  return Tensor(dims, std::move(data));
}

void save_tensor(const std::string& path, const std::string& name, const Tensor& t) {
  // atomic: write to a temp file, then rename
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot open " + tmp);
    write_tensor_record(os, name, t);
    if (!os) throw std::runtime_error("checkpoint: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("checkpoint: rename failed for " + path);
}

Tensor load_tensor(const std::string& path, std::string* name) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  std::string n;
  Tensor t = read_tensor_record(is, n);
  if (name) *name = n;
  return t;
}

}  // namespace tnsym
