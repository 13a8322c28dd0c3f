// SPDX-License-Identifier: Apache-2.0
#include "wnls/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "wnls/error.hpp"

namespace wnls {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  template <class T>
  T get(const char* what) {
    if (bytes_.size() - pos_ < sizeof(T) || pos_ > bytes_.size())
      throw FormatError(std::string("truncated checkpoint while reading ") + what, pos_);
    std::uint8_t buf[sizeof(T)];
    std::memcpy(buf, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
  }

  std::size_t pos() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const SystemParams& p, const FieldPair& s) {
  const SpectralGrid& g = s.grid();
  std::vector<std::uint8_t> out;
  out.reserve(kCheckpointHeaderBytes + 32 * g.size());
  for (char c : {'W', 'N', 'L', 'S'}) out.push_back(static_cast<std::uint8_t>(c));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  for (double x : {g.half_width(), s.t, p.alpha, p.beta, p.lambda, p.mu}) put<double>(out, x);
  for (const Field* f : {&s.u, &s.v}) {
    for (const cplx& z : f->data) {
      put<double>(out, z.real());
      put<double>(out, z.imag());
    }
  }
  return out;
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  if (bytes.size() < 4) throw FormatError("truncated checkpoint while reading magic", bytes.size());
  if (std::memcmp(bytes.data(), "WNLS", 4) != 0) throw FormatError("bad magic", 0);
  r.get<std::uint32_t>("magic");
  const std::size_t version_at = r.pos();
  const auto version = r.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) throw UnsupportedVersion(version, version_at);
  const std::size_t d_at = r.pos();
  const auto d = r.get<std::uint32_t>("dimension");
  const std::size_t n_at = r.pos();
  const auto n = r.get<std::uint32_t>("sample count");
  const std::size_t L_at = r.pos();
  const double L = r.get<double>("L");
  const double t = r.get<double>("t");
  Checkpoint c;
  c.params.d = static_cast<int>(d);
  c.params.alpha = r.get<double>("alpha");
  c.params.beta = r.get<double>("beta");
  c.params.lambda = r.get<double>("lambda");
  c.params.mu = r.get<double>("mu");
  c.params.allow_sign_mismatch = true;

  if (d < 1 || d > 3) throw FormatError("dimension out of range", d_at);
  if (!(L > 0.0) || !std::isfinite(L)) throw FormatError("half-width must be positive and finite", L_at);
  GridPtr grid;
  try {
    grid = SpectralGrid::create(static_cast<int>(d), n, L);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("invalid grid: ") + e.what(), n_at);
  }
  const std::size_t payload = 2 * grid->size() * 16;
  if (r.remaining() < payload) throw FormatError("truncated sample payload", bytes.size());
  if (r.remaining() > payload) throw FormatError("trailing bytes after sample payload", r.pos() + payload);
  c.state = FieldPair(grid, t);
  for (Field* f : {&c.state.u, &c.state.v}) {
    for (cplx& z : f->data) {
      const double re = r.get<double>("sample");
      const double im = r.get<double>("sample");
      z = cplx(re, im);
    }
  }
  return c;
}

void save_checkpoint(const std::string& path, const SystemParams& p, const FieldPair& s) {
  const std::vector<std::uint8_t> bytes = encode_checkpoint(p, s);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write to '" + path + "' failed");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace wnls
