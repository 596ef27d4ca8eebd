#include "cometh/checkpoint.hpp"

#include <fstream>

namespace cometh {
namespace {

constexpr char kMagic[] = "COMETHCKPT";
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_tensor_map(std::ostream& out,
                      const std::map<std::string, Matrix>& tensors) {
  write_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, tensor] : tensors) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u32(out, static_cast<std::uint32_t>(tensor.rows()));
    write_u32(out, static_cast<std::uint32_t>(tensor.cols()));
    for (int r = 0; r < tensor.rows(); ++r)
      out.write(reinterpret_cast<const char*>(tensor.row(r).eval().data()),
                static_cast<std::streamsize>(tensor.cols() * sizeof(Real)));
  }
}

std::map<std::string, Matrix> read_tensor_map(std::istream& in) {
  std::map<std::string, Matrix> tensors;
  const std::uint32_t count = read_u32(in);
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t name_len = read_u32(in);
    if (name_len > 4096) throw DataError("corrupt checkpoint: name too long");
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const std::uint32_t rows = read_u32(in);
    const std::uint32_t cols = read_u32(in);
    if (!in || rows > 1u << 20 || cols > 1u << 20)
      throw DataError("corrupt checkpoint: bad tensor shape");
    Matrix tensor(rows, cols);
    std::vector<Real> row(cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(cols * sizeof(Real)));
      for (std::uint32_t c = 0; c < cols; ++c) tensor(r, c) = row[c];
    }
    if (!in) throw DataError("corrupt checkpoint: truncated tensor data");
    tensors.emplace(std::move(name), std::move(tensor));
  }
  return tensors;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out.write(kMagic, sizeof(kMagic) - 1);
  write_u32(out, kVersion);
  const DenoiserConfig& c = ckpt.params.config;
  for (int v : {c.hidden_dim, c.n_layers, c.n_heads, c.rrwp_K, c.a, c.b,
                c.global_dim, c.conditioner_dim})
    write_u32(out, static_cast<std::uint32_t>(v));
  write_u64(out, c.seed);
  write_tensor_map(out, ckpt.params.tensors);
  write_u32(out, ckpt.has_optimizer_state() ? 1 : 0);
  if (ckpt.has_optimizer_state()) {
    write_u64(out, ckpt.step);
    write_tensor_map(out, ckpt.adam_m);
    write_tensor_map(out, ckpt.adam_v);
  }
  if (!out) throw DataError("write to " + path + " failed");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  char magic[sizeof(kMagic) - 1];
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, sizeof(magic)) != kMagic)
    throw DataError(path + " is not a checkpoint file");
  if (read_u32(in) != kVersion)
    throw DataError("unsupported checkpoint version in " + path);
  Checkpoint ckpt;
  DenoiserConfig& c = ckpt.params.config;
  c.hidden_dim = static_cast<int>(read_u32(in));
  c.n_layers = static_cast<int>(read_u32(in));
  c.n_heads = static_cast<int>(read_u32(in));
  c.rrwp_K = static_cast<int>(read_u32(in));
  c.a = static_cast<int>(read_u32(in));
  c.b = static_cast<int>(read_u32(in));
  c.global_dim = static_cast<int>(read_u32(in));
  c.conditioner_dim = static_cast<int>(read_u32(in));
  c.seed = read_u64(in);
  if (!in) throw DataError("corrupt checkpoint: truncated config");
  c.validate();
  ckpt.params.tensors = read_tensor_map(in);
  if (read_u32(in) == 1) {
    ckpt.step = read_u64(in);
    ckpt.adam_m = read_tensor_map(in);
    ckpt.adam_v = read_tensor_map(in);
  }
  ckpt.params.check_finite();
  return ckpt;
}

}  // namespace cometh
