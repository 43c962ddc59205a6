#include "hartree/io.hpp"

#include "hartree/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace hartree {

void write_file_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, target);
}

namespace {

constexpr char kMagic[4] = {'H', 'R', 'T', 'L'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 * 8;

template <class T>
void put(std::string& out, T value) {
  char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.append(raw, sizeof(T));
}

template <class T>
T take(const std::string& in, std::size_t& pos) {
  char raw[sizeof(T)];
  std::memcpy(raw, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int integral_field(double v, const std::string& path, const char* name) {
  if (!(v >= 1.0 && v <= 1e7) || v != static_cast<double>(static_cast<int>(v)))
    throw FormatError(path + ": header field " + name + " is not a valid count");
  return static_cast<int>(v);
}

CheckpointHeader parse_header(const std::string& bytes, const std::string& path) {
  if (bytes.size() < kHeaderBytes) throw FormatError(path + ": truncated checkpoint header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError(path + ": not a checkpoint (bad magic)");
  std::size_t pos = 4;
  CheckpointHeader h;
  h.version = take<std::uint32_t>(bytes, pos);
  if (h.version != kCheckpointVersion)
    throw FormatError(path + ": unsupported checkpoint version " + std::to_string(h.version));
  h.n = integral_field(take<double>(bytes, pos), path, "n");
  h.N = integral_field(take<double>(bytes, pos), path, "N");
  h.r_max = take<double>(bytes, pos);
  h.t = take<double>(bytes, pos);
  if (!(h.r_max > 0.0) || !std::isfinite(h.r_max) || !std::isfinite(h.t))
    throw FormatError(path + ": corrupt checkpoint header");
  const std::size_t expected = kHeaderBytes + 16 * static_cast<std::size_t>(h.N);
  if (bytes.size() < expected) throw FormatError(path + ": truncated checkpoint payload");
  if (bytes.size() > expected) throw FormatError(path + ": trailing bytes after checkpoint payload");
  return h;
}

FieldState decode(const std::string& bytes, const CheckpointHeader& h, const GridPtr& grid) {
  Eigen::VectorXcd values(h.N);
  std::size_t pos = kHeaderBytes;
  for (int k = 0; k < h.N; ++k) {
    const double re = take<double>(bytes, pos);
    const double im = take<double>(bytes, pos);
    values[k] = Complex(re, im);
  }
  return FieldState(grid, std::move(values), h.t);
}

}  // namespace

void write_checkpoint(const std::string& path, const FieldState& u) {
  const auto& spec = u.grid().spec();
  std::string out;
  out.reserve(kHeaderBytes + 16 * static_cast<std::size_t>(spec.N));
  out.append(kMagic, 4);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<double>(out, spec.n);
  put<double>(out, spec.N);
  put<double>(out, spec.r_max);
  put<double>(out, u.time());
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    put<double>(out, u.values()[k].real());
    put<double>(out, u.values()[k].imag());
  }
  write_file_atomic(path, out);
}

CheckpointHeader read_checkpoint_header(const std::string& path) { return parse_header(slurp(path), path); }

FieldState read_checkpoint(const std::string& path, const GridPtr& grid) {
  const std::string bytes = slurp(path);
  const CheckpointHeader h = parse_header(bytes, path);
  const GridSpec stored{h.n, h.N, h.r_max};
  if (!(stored == grid->spec())) {
    std::ostringstream msg;
    msg << path << ": checkpoint grid (n=" << h.n << ", N=" << h.N << ", r_max=" << h.r_max
        << ") is incompatible with the requested grid (n=" << grid->dimension() << ", N=" << grid->size()
        << ", r_max=" << grid->r_max() << ")";
    throw GridMismatch(msg.str());
  }
  return decode(bytes, h, grid);
}

FieldState read_checkpoint(const std::string& path) {
  const std::string bytes = slurp(path);
  const CheckpointHeader h = parse_header(bytes, path);
  return decode(bytes, h, build_radial_grid(h.n, h.N, h.r_max));
}

}  // namespace hartree
