// Copyright 2026 The orsim Authors
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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orsim::gravity {

/// Newton's constant, m^3 kg^-1 s^-2.
inline constexpr double kG = 6.674e-11;
/// Reduced Planck constant, J s.
inline constexpr double kHbar = 1.0546e-34;

/// Collapse-time prefactor used for the reference collapse-time grid.
inline constexpr double kGammaTable = 1.0;
/// Penrose's theoretical estimate 1/(8 pi).
inline constexpr double kGammaPenrose = 1.0 / (8.0 * std::numbers::pi);

/// Self-energy of a uniform cube of unit side and unit mass, int int 1/|x-y| (no 1/2 factor).
inline constexpr double kUnitCubeSelfEnergy = 1.8823126443896601;

enum class Geometry { point, sphere };

/**
 * Mass geometry of the control hardware. Each of `n_bits` channels moves
 * `mass_per_bit`; the channels add coherently, so the displaced mass is
 * M = n_bits * mass_per_bit. Energies are reported as magnitudes.
 */
struct MassConfig {
  std::size_t n_bits = 1;
  double mass_per_bit = 0;  // kg
  double separation = 0;    // m
  Geometry geometry = Geometry::point;
  double radius = 0;        // m, sphere only

  double total_mass() const { return static_cast<double>(n_bits) * mass_per_bit; }

  void validate() const {
    if (n_bits == 0) throw std::invalid_argument("MassConfig: n_bits must be positive");
    if (!(mass_per_bit > 0)) throw std::invalid_argument("MassConfig: mass_per_bit must be positive");
    if (!(separation > 0)) throw std::invalid_argument("MassConfig: separation must be positive");
    if (geometry == Geometry::sphere && !(radius > 0)) throw std::invalid_argument("MassConfig: radius must be positive");
  }
};

/// E_G = G M^2 / d for point masses.
inline double self_energy_point(const MassConfig& config) {
  config.validate();
  if (config.geometry != Geometry::point) throw std::invalid_argument("self_energy_point: geometry is not point");
  const double m = config.total_mass();
  return kG * m * m / config.separation;
}

/**
 * Difference-density energy of two displaced uniform spheres:
 * E_G(d) = (12/5) G M^2 / R - 2 G M^2 / d, valid for d >= 2R.
 */
inline double self_energy_spheres(const MassConfig& config) {
  config.validate();
  if (config.geometry != Geometry::sphere) throw std::invalid_argument("self_energy_spheres: geometry is not sphere");
  if (config.separation < 2 * config.radius)
    throw std::invalid_argument("self_energy_spheres: spheres overlap (d < 2R); use self_energy_quadrature");
  const double m = config.total_mass();
  return 2.4 * kG * m * m / config.radius - 2.0 * kG * m * m / config.separation;
}

/// Mass per cell on a regular nx*ny*nz grid of cubic cells; index (i,j,k) -> (i*ny + j)*nz + k.
struct MassGrid {
  std::size_t nx = 0, ny = 0, nz = 0;
  std::vector<double> mass;

  MassGrid() = default;
  MassGrid(std::size_t x, std::size_t y, std::size_t z) : nx(x), ny(y), nz(z), mass(x * y * z, 0.0) {}

  double& at(std::size_t i, std::size_t j, std::size_t k) { return mass[(i * ny + j) * nz + k]; }
  double at(std::size_t i, std::size_t j, std::size_t k) const { return mass[(i * ny + j) * nz + k]; }

  double total() const {
    double s = 0;
    for (double m : mass) s += m;
    return s;
  }
  bool same_shape(const MassGrid& o) const { return nx == o.nx && ny == o.ny && nz == o.nz; }
};

namespace detail {

struct Cell {
  std::array<long, 3> idx;
  double mass;
};

inline std::vector<Cell> nonzero_cells(const MassGrid& g, const std::vector<double>& values) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j)
      for (std::size_t k = 0; k < g.nz; ++k) {
        const double v = values[(i * g.ny + j) * g.nz + k];
        if (v != 0) cells.push_back({{static_cast<long>(i), static_cast<long>(j), static_cast<long>(k)}, v});
      }
  return cells;
}

/// 1/|offset| in cell units, tabulated over the grid extent; entry 0 holds the cube self term.
class InverseDistance {
 public:
  explicit InverseDistance(const MassGrid& g) : ny_(g.ny), nz_(g.nz), table_(g.nx * g.ny * g.nz) {
    for (std::size_t i = 0; i < g.nx; ++i)
      for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t k = 0; k < g.nz; ++k) {
          const double r2 = static_cast<double>(i * i + j * j + k * k);
          table_[(i * ny_ + j) * nz_ + k] = r2 == 0 ? kUnitCubeSelfEnergy : 1.0 / std::sqrt(r2);
        }
  }
  double operator()(const Cell& a, const Cell& b) const {
    const auto di = static_cast<std::size_t>(std::labs(a.idx[0] - b.idx[0]));
    const auto dj = static_cast<std::size_t>(std::labs(a.idx[1] - b.idx[1]));
    const auto dk = static_cast<std::size_t>(std::labs(a.idx[2] - b.idx[2]));
    return table_[(di * ny_ + dj) * nz_ + dk];
  }

 private:
  std::size_t ny_, nz_;
  std::vector<double> table_;
};

/// sum_i sum_j u_i v_j K(i,j), fixed summation order.
inline double pair_sum(const std::vector<Cell>& u, const std::vector<Cell>& v, const InverseDistance& kernel) {
  double total = 0;
  for (const auto& a : u) {
    double row = 0;
    for (const auto& b : v) row += b.mass * kernel(a, b);
    total += a.mass * row;
  }
  return total;
}

inline void check_grids(const MassGrid& a, const MassGrid& b, double cell, const char* what) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(what) + ": grids differ in shape");
  if (a.mass.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  if (a.mass.size() != a.nx * a.ny * a.nz || b.mass.size() != b.nx * b.ny * b.nz)
    throw std::invalid_argument(std::string(what) + ": grid storage does not match its shape");
  if (!(cell > 0)) throw std::invalid_argument(std::string(what) + ": cell size must be positive");
  for (double m : a.mass)
    if (m < 0) throw std::invalid_argument(std::string(what) + ": negative density");
  for (double m : b.mass)
    if (m < 0) throw std::invalid_argument(std::string(what) + ": negative density");
  const double ta = a.total();
  const double tb = b.total();
  if (!(ta > 0) || !(tb > 0)) throw std::invalid_argument(std::string(what) + ": empty grid");
}

}  // namespace detail

/**
 * Gravitational self-energy of the difference density a - b,
 * G sum_ij (a-b)_i (a-b)_j / |x_i - x_j|, with the uniform-cube self term on
 * the diagonal. Same convention as `self_energy_spheres`.
 */
inline double self_energy_quadrature(const MassGrid& a, const MassGrid& b, double cell) {
  detail::check_grids(a, b, cell, "self_energy_quadrature");
  const double ta = a.total();
  const double tb = b.total();
  if (std::abs(ta - tb) > 1e-3 * std::max(ta, tb))
    throw std::invalid_argument("self_energy_quadrature: total masses differ by more than 0.1%");
  std::vector<double> diff(a.mass.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.mass[i] - b.mass[i];
  const auto cells = detail::nonzero_cells(a, diff);
  const detail::InverseDistance kernel(a);
  return kG * detail::pair_sum(cells, cells, kernel) / cell;
}

/// Mutual energy G sum_ij a_i b_j / |x_i - x_j| between two distributions.
inline double mutual_energy_quadrature(const MassGrid& a, const MassGrid& b, double cell) {
  detail::check_grids(a, b, cell, "mutual_energy_quadrature");
  const auto ca = detail::nonzero_cells(a, a.mass);
  const auto cb = detail::nonzero_cells(b, b.mass);
  const detail::InverseDistance kernel(a);
  return kG * detail::pair_sum(ca, cb, kernel) / cell;
}

/**
 * Uniform sphere of total `mass` voxelized by sub-sampling each cell on a
 * `subsamples`^3 lattice; cell values are normalized so the grid holds
 * exactly `mass`. `center` is in metres from the grid's corner.
 */
inline MassGrid uniform_sphere_grid(std::size_t nx, std::size_t ny, std::size_t nz, double cell,
                                    std::array<double, 3> center, double radius, double mass,
                                    std::size_t subsamples = 8) {
  if (!(cell > 0) || !(radius > 0) || !(mass > 0) || subsamples == 0)
    throw std::invalid_argument("uniform_sphere_grid: cell, radius, mass and subsamples must be positive");
  MassGrid g(nx, ny, nz);
  const double r2 = radius * radius;
  const double half_diag = std::sqrt(3.0) * cell / 2;
  const double step = cell / static_cast<double>(subsamples);
  double filled = 0;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t k = 0; k < nz; ++k) {
        const std::array<double, 3> origin{static_cast<double>(i) * cell, static_cast<double>(j) * cell,
                                           static_cast<double>(k) * cell};
        double dc2 = 0;
        for (int a = 0; a < 3; ++a) {
          const double d = origin[a] + cell / 2 - center[a];
          dc2 += d * d;
        }
        const double dc = std::sqrt(dc2);
        double frac;
        if (dc + half_diag <= radius) {
          frac = 1.0;
        } else if (dc - half_diag > radius) {
          frac = 0.0;
        } else {
          std::size_t inside = 0;
          for (std::size_t p = 0; p < subsamples; ++p)
            for (std::size_t q = 0; q < subsamples; ++q)
              for (std::size_t s = 0; s < subsamples; ++s) {
                const double x = origin[0] + (static_cast<double>(p) + 0.5) * step - center[0];
                const double y = origin[1] + (static_cast<double>(q) + 0.5) * step - center[1];
                const double z = origin[2] + (static_cast<double>(s) + 0.5) * step - center[2];
                if (x * x + y * y + z * z <= r2) ++inside;
              }
          frac = static_cast<double>(inside) / static_cast<double>(subsamples * subsamples * subsamples);
        }
        g.at(i, j, k) = frac;
        filled += frac;
      }
  if (filled == 0) throw std::invalid_argument("uniform_sphere_grid: sphere does not intersect the grid");
  for (double& m : g.mass) m *= mass / filled;
  return g;
}

/// Two equal uniform spheres on an n^3 grid, displaced along the body diagonal.
struct SpherePair {
  MassGrid a;
  MassGrid b;
  double cell = 0;
};

/**
 * Lays out two spheres of radius R, centre distance d, along the cube
 * diagonal so each axis only has to span d/sqrt(3) + 2R.
 */
inline SpherePair displaced_spheres(std::size_t n, double radius, double separation, double mass,
                                    std::size_t subsamples = 8) {
  if (n == 0) throw std::invalid_argument("displaced_spheres: grid size must be positive");
  const double axis_offset = separation / std::sqrt(3.0);
  const double extent = axis_offset + 2 * radius;
  const double cell = extent / static_cast<double>(n);
  const double lo = radius;
  const double hi = radius + axis_offset;
  SpherePair out;
  out.cell = cell;
  out.a = uniform_sphere_grid(n, n, n, cell, {lo, lo, lo}, radius, mass, subsamples);
  out.b = uniform_sphere_grid(n, n, n, cell, {hi, hi, hi}, radius, mass, subsamples);
  return out;
}

/// tau = gamma hbar / E_G in seconds.
inline double collapse_time(double e_g, double gamma) {
  if (!(e_g > 0)) throw std::invalid_argument("collapse_time: energy must be positive");
  if (!(gamma > 0)) throw std::invalid_argument("collapse_time: gamma must be positive");
  return gamma * kHbar / e_g;
}

enum class Feasibility { green, yellow, red };

inline std::string_view to_string(Feasibility f) {
  switch (f) {
    case Feasibility::green: return "green";
    case Feasibility::yellow: return "yellow";
    case Feasibility::red: return "red";
  }
  return "?";
}

/// green: 10-100 us; yellow: 10-500 us outside green; red: everything else.
inline Feasibility classify(double tau_s) {
  if (tau_s >= 10e-6 && tau_s <= 100e-6) return Feasibility::green;
  if (tau_s >= 10e-6 && tau_s <= 500e-6) return Feasibility::yellow;
  return Feasibility::red;
}

struct CollapseCell {
  std::size_t bits = 0;
  double mass = 0;
  double tau_s = 0;
  Feasibility feasibility = Feasibility::red;
};

struct CollapseTable {
  std::vector<std::size_t> bits;
  std::vector<double> masses;
  double separation = 0;
  double gamma = 1;
  std::vector<std::vector<CollapseCell>> cells;  // [bits row][mass column]
};

/// Point-geometry collapse times for every (bits, mass-per-bit) pair.
inline CollapseTable fig1_table(const std::vector<std::size_t>& bits, const std::vector<double>& masses,
                                double separation, double gamma) {
  if (bits.empty() || masses.empty()) throw std::invalid_argument("fig1_table: bits and masses must be non-empty");
  if (!(separation > 0)) throw std::invalid_argument("fig1_table: separation must be positive");
  CollapseTable t{bits, masses, separation, gamma, {}};
  for (auto n : bits) {
    std::vector<CollapseCell> row;
    for (double m : masses) {
      const double e = self_energy_point({n, m, separation, Geometry::point, 0});
      const double tau = collapse_time(e, gamma);
      row.push_back({n, m, tau, classify(tau)});
    }
    t.cells.push_back(std::move(row));
  }
  return t;
}

inline std::string format_sig(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// `v` rounded to `digits` significant figures, printed without an exponent.
inline std::string format_fixed_sig(double v, int digits) {
  if (v == 0 || !std::isfinite(v)) return format_sig(v, digits);
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(v))));
  const double scale = std::pow(10.0, exponent - digits + 1);
  const double rounded = std::round(v / scale) * scale;
  const int decimals = std::max(0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(rounded)))));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  return buf;
}

/**
 * Seconds rendered to `digits` significant figures in the largest unit
 * (s, ms, us, ns, ps, fs) that keeps the rounded value >= 1.
 */
inline std::string format_duration(double seconds, int digits = 6) {
  static constexpr std::array<std::pair<double, const char*>, 6> units{
      {{1.0, "s"}, {1e-3, "ms"}, {1e-6, "us"}, {1e-9, "ns"}, {1e-12, "ps"}, {1e-15, "fs"}}};
  for (const auto& [scale, name] : units) {
    const auto text = format_fixed_sig(seconds / scale, digits);
    if (std::strtod(text.c_str(), nullptr) >= 1.0) return text + " " + name;
  }
  return format_fixed_sig(seconds / 1e-15, digits) + " fs";
}

/// One row per cell: label, tau in seconds, feasibility class.
inline std::string table_to_csv(const CollapseTable& t) {
  std::string out = "cell,tau_s,class\n";
  for (const auto& row : t.cells)
    for (const auto& c : row)
      out += std::to_string(c.bits) + "bits@" + format_sig(c.mass) + "kg," + format_sig(c.tau_s) + "," +
             std::string(to_string(c.feasibility)) + "\n";
  return out;
}

/// Aligned grid; each cell shows tau and its class initial.
inline std::string table_to_text(const CollapseTable& t) {
  constexpr int kWidth = 18;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
  };
  std::string out = pad("bits \\ kg", 10);
  for (double m : t.masses) out += pad(format_sig(m), kWidth);
  out += "\n";
  for (const auto& row : t.cells) {
    out += pad(std::to_string(row.front().bits), 10);
    for (const auto& c : row)
      out += pad(format_duration(c.tau_s, 3) + " [" + std::string(1, to_string(c.feasibility)[0]) + "]", kWidth);
    out += "\n";
  }
  out += "separation " + format_sig(t.separation) + " m, gamma " + format_sig(t.gamma) +
         "; [g] 10-100 us, [y] 100-500 us, [r] otherwise\n";
  return out;
}

}  // namespace orsim::gravity
