// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace rlab {

using cplx = std::complex<double>;

// Row-major samples on a uniform rectangular lattice; node i on axis a sits
// at origin[a] + i * spacing[a].
template <class T>
struct Grid {
  std::vector<std::size_t> dims;
  std::vector<double> spacing;
  std::vector<double> origin;
  std::vector<T> data;

  Grid() = default;
  Grid(std::vector<std::size_t> dims_, std::vector<double> spacing_, std::vector<double> origin_)
      : dims(std::move(dims_)), spacing(std::move(spacing_)), origin(std::move(origin_)) {
    if (dims.size() != spacing.size() || dims.size() != origin.size())
      throw std::invalid_argument("grid rank mismatch");
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    data.assign(n, T{});
  }

  std::size_t rank() const { return dims.size(); }
  std::size_t size() const { return data.size(); }
  double coord(std::size_t axis, std::size_t i) const { return origin[axis] + static_cast<double>(i) * spacing[axis]; }
  double cell_volume() const {
    double v = 1.0;
    for (double h : spacing) v *= h;
    return v;
  }
  T& operator[](std::size_t i) { return data[i]; }
  const T& operator[](std::size_t i) const { return data[i]; }
  T& at(std::size_t i, std::size_t j) { return data[i * dims[1] + j]; }
  const T& at(std::size_t i, std::size_t j) const { return data[i * dims[1] + j]; }
};

using RealGrid = Grid<double>;
using ComplexGrid = Grid<cplx>;

template <class T>
Grid<T> like(const Grid<T>& g) {
  return Grid<T>(g.dims, g.spacing, g.origin);
}

namespace io {

// Binary layout, all little-endian:
//   char[8] "RLGRID01", u32 rank, u32 kind (1 real, 2 complex),
//   rank x u64 dims, rank x f64 spacing, rank x f64 origin, then the samples
//   row-major (complex as re, im pairs).
inline void put_bytes(std::ostream& os, const void* p, std::size_t n) {
  static_assert(std::endian::native == std::endian::little, "little-endian host assumed");
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}
inline void get_bytes(std::istream& is, void* p, std::size_t n) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!is) throw std::runtime_error("truncated grid file");
}

template <class T>
void write_binary(std::ostream& os, const Grid<T>& g) {
  constexpr bool is_c = std::is_same_v<T, cplx>;
  os.write("RLGRID01", 8);
  std::uint32_t rank = static_cast<std::uint32_t>(g.rank()), kind = is_c ? 2u : 1u;
  put_bytes(os, &rank, 4);
  put_bytes(os, &kind, 4);
  for (auto d : g.dims) {
    std::uint64_t v = d;
    put_bytes(os, &v, 8);
  }
  put_bytes(os, g.spacing.data(), 8 * g.rank());
  put_bytes(os, g.origin.data(), 8 * g.rank());
  put_bytes(os, g.data.data(), sizeof(T) * g.size());
}

template <class T>
Grid<T> read_binary(std::istream& is) {
  constexpr bool is_c = std::is_same_v<T, cplx>;
  char magic[8];
  get_bytes(is, magic, 8);
  if (std::memcmp(magic, "RLGRID01", 8) != 0) throw std::runtime_error("not a grid file");
  std::uint32_t rank = 0, kind = 0;
  get_bytes(is, &rank, 4);
  get_bytes(is, &kind, 4);
  if (kind != (is_c ? 2u : 1u)) throw std::runtime_error("grid value kind mismatch");
  std::vector<std::size_t> dims(rank);
  for (auto& d : dims) {
    std::uint64_t v;
    get_bytes(is, &v, 8);
    d = static_cast<std::size_t>(v);
  }
  std::vector<double> sp(rank), org(rank);
  get_bytes(is, sp.data(), 8 * rank);
  get_bytes(is, org.data(), 8 * rank);
  Grid<T> g(dims, sp, org);
  get_bytes(is, g.data.data(), sizeof(T) * g.size());
  return g;
}

template <class T>
void save_binary(const std::string& path, const Grid<T>& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_binary(os, g);
}

template <class T>
Grid<T> load_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_binary<T>(is);
}

// CSV with one row per node: coordinates, then value (re, im for complex).
template <class T>
std::string to_csv(const Grid<T>& g) {
  constexpr bool is_c = std::is_same_v<T, cplx>;
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t a = 0; a < g.rank(); ++a) os << "x" << a << ",";
  os << (is_c ? "re,im\n" : "value\n");
  std::vector<std::size_t> idx(g.rank(), 0);
  for (std::size_t n = 0; n < g.size(); ++n) {
    std::size_t rem = n;
    for (std::size_t a = g.rank(); a-- > 0;) {
      idx[a] = rem % g.dims[a];
      rem /= g.dims[a];
    }
    for (std::size_t a = 0; a < g.rank(); ++a) os << g.coord(a, idx[a]) << ",";
    if constexpr (is_c)
      os << g.data[n].real() << "," << g.data[n].imag() << "\n";
    else
      os << g.data[n] << "\n";
  }
  return os.str();
}

}  // namespace io
}  // namespace rlab
