#pragma once
// On-disk tensor format: a structured-text header followed by raw
// little-endian IEEE-754 doubles, interleaved real/imaginary, row-major.
//
//   tnsym-tensor v1
//   name <tag>
//   rank <r>
//   dims <d0> <d1> ...
//   count <n>
//   endian little
//   data
//   <2*n raw doubles>
//
// Multi-tensor containers simply concatenate records; readers validate the
// magic line, version, and element count of every record.

#include <iosfwd>
#include <string>

#include "tnsym/tensor.hpp"

namespace tnsym {

void write_tensor_record(std::ostream& os, const std::string& name, const Tensor& t);
Tensor read_tensor_record(std::istream& is, std::string& name);

void save_tensor(const std::string& path, const std::string& name, const Tensor& t);
Tensor load_tensor(const std::string& path, std::string* name = nullptr);

}  // namespace tnsym
