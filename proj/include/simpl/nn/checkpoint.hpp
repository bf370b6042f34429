// Copyright 2026 The SIMPL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMPL__NN__CHECKPOINT_HPP_
#define SIMPL__NN__CHECKPOINT_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/nn/param_store.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace simpl::nn
{
static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

inline constexpr const char * kCheckpointMagic = "SIMPL-CKPT v1";

template <typename T>
constexpr const char * dtype_name()
{
  if constexpr (std::is_same_v<T, float>) {
    return "f32";
  } else {
    static_assert(std::is_same_v<T, double>, "unsupported scalar type");
    return "f64";
  }
}

/**
 * @brief In-memory contents of a checkpoint file. Tensors are widened to double on read;
 * `dtypes` records the on-disk type of each tensor.
 */
struct CheckpointData
{
  std::string header;  //!< Remainder of the first line after the magic (model config JSON).
  std::map<std::string, Tensor<double>> tensors;
  std::map<std::string, std::string> dtypes;
};

/**
 * @brief Write `SIMPL-CKPT v1`. Layout: `SIMPL-CKPT v1 <header>\n`, then for every parameter in
 * name order a line `name dtype ndim e1 ... ek\n` followed by the raw little-endian values.
 */
template <typename T>
void save_checkpoint(const std::string & path, const ParamStore<T> & store, const std::string & header)
{
  expect(header.find('\n') == std::string::npos, "checkpoint header must be a single line");
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw SimplException(SimplError_t::IoError, "cannot open checkpoint for writing: " + path);
  }
  os << kCheckpointMagic << ' ' << header << '\n';
  for (const auto & [name, p] : store.params()) {
    os << name << ' ' << dtype_name<T>() << ' ' << p.value.ndim();
    for (auto e : p.value.shape()) {
      os << ' ' << e;
    }
    os << '\n';
    os.write(
      reinterpret_cast<const char *>(p.value.data()),
      static_cast<std::streamsize>(p.value.size() * sizeof(T)));
  }
  if (!os) {
    throw SimplException(SimplError_t::IoError, "failed writing checkpoint: " + path);
  }
}

inline CheckpointData read_checkpoint(const std::string & path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw SimplException(SimplError_t::IoError, "cannot open checkpoint: " + path);
  }
  CheckpointData out;
  std::string line;
  std::getline(is, line);
  const std::string magic = kCheckpointMagic;
  if (line.compare(0, magic.size(), magic) != 0) {
    throw SimplException(SimplError_t::IoError, "not a SIMPL-CKPT v1 file: " + path);
  }
  out.header = line.size() > magic.size() ? line.substr(magic.size() + 1) : "";
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream ls(line);
    std::string name;
    std::string dtype;
    std::size_t ndim = 0;
    if (!(ls >> name >> dtype >> ndim)) {
      throw SimplException(SimplError_t::IoError, "corrupt tensor header in " + path);
    }
    Shape shape(ndim);
    for (auto & e : shape) {
      if (!(ls >> e)) {
        throw SimplException(SimplError_t::IoError, "corrupt tensor shape for " + name);
      }
    }
    const std::size_t n = numel(shape);
    std::vector<double> values(n);
    if (dtype == "f32") {
      std::vector<float> raw(n);
      is.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(n * sizeof(float)));
      std::copy(raw.begin(), raw.end(), values.begin());
    } else if (dtype == "f64") {
      is.read(reinterpret_cast<char *>(values.data()), static_cast<std::streamsize>(n * sizeof(double)));
    } else {
      throw SimplException(SimplError_t::IoError, "unknown dtype '" + dtype + "' for " + name);
    }
    if (!is) {
      throw SimplException(SimplError_t::IoError, "truncated tensor data for " + name);
    }
    out.dtypes[name] = dtype;
    out.tensors.emplace(name, Tensor<double>(shape, std::move(values)));
  }
  return out;
}

/**
 * @brief Copy checkpoint tensors into an already-constructed store. Names and shapes must match
 * exactly.
 */
template <typename T>
void load_parameters(const CheckpointData & data, ParamStore<T> & store)
{
  if (data.tensors.size() != store.size()) {
    throw SimplException(
      SimplError_t::IoError, "checkpoint has " + std::to_string(data.tensors.size()) +
                               " tensors, model expects " + std::to_string(store.size()));
  }
  for (auto & [name, p] : store.params()) {
    auto it = data.tensors.find(name);
    if (it == data.tensors.end()) {
      throw SimplException(SimplError_t::IoError, "checkpoint is missing tensor " + name);
    }
    if (it->second.shape() != p.value.shape()) {
      throw SimplException(
        SimplError_t::IoError, "shape mismatch for " + name + ": " +
                                 shape_str(it->second.shape()) + " vs " +
                                 shape_str(p.value.shape()));
    }
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      p.value[i] = static_cast<T>(it->second[i]);
    }
  }
}
}  // namespace simpl::nn
#endif  // SIMPL__NN__CHECKPOINT_HPP_
