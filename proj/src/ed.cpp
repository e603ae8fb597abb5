#include "tnsym/ed.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "tnsym/linalg.hpp"

namespace tnsym {

namespace {

// basis states are bit strings over n = 2L qubits, spin 0 most significant
struct Lattice {
  std::size_t L, n, dim, mask;
  std::size_t even_mask = 0, odd_mask = 0;

  explicit Lattice(std::size_t L_) : L(L_), n(2 * L_), dim(std::size_t(1) << (2 * L_)) {
    if (L < 2 || n > 16) throw std::invalid_argument("lattice: need 2 <= L <= 8");
    mask = dim - 1;
    for (std::size_t q = 0; q < n; q += 2) even_mask |= std::size_t(1) << (n - 1 - q);
    for (std::size_t q = 1; q < n; q += 2) odd_mask |= std::size_t(1) << (n - 1 - q);
  }

  int bit(std::size_t s, std::size_t q) const {
    return static_cast<int>((s >> (n - 1 - (q % n))) & 1u);
  }
  int zval(std::size_t s, std::size_t q) const { return 1 - 2 * bit(s, q); }
  std::size_t flip(std::size_t s, std::size_t q) const {
    return s ^ (std::size_t(1) << (n - 1 - (q % n)));
  }
  // translation by k spins (spin q -> spin q+k)
  std::size_t translate(std::size_t s, std::size_t k) const {
    k %= n;
    if (k == 0) return s;
    return ((s >> k) | (s << (n - k))) & mask;
  }
  // abelian blocking group: T_site^m X_red^alpha X_blue^beta,
  // element id e = m + L*(alpha + 2*beta)
  std::size_t act(std::size_t e, std::size_t s) const {
    const std::size_t m = e % L, ab = e / L;
    std::size_t t = translate(s, 2 * m);
    if (ab & 1u) t ^= even_mask;
    if (ab & 2u) t ^= odd_mask;
    return t;
  }
  double u001(std::size_t s) const {
    int e = 0;
    for (std::size_t q = 0; q < n; ++q) e += bit(s, q) * bit(s, q + 1);
    return (e & 1) ? -1.0 : 1.0;
  }
};

struct Orbits {
  std::vector<std::int32_t> rep_of;      // state -> orbit id
  std::vector<std::uint16_t> g_of;       // state = act(g_of, reps[rep_of])
  std::vector<std::size_t> reps;         // orbit id -> representative state
  std::vector<std::vector<std::uint16_t>> stab;  // stabilizer element ids
};

Orbits build_orbits(const Lattice& lat) {
  Orbits o;
  o.rep_of.assign(lat.dim, -1);
  o.g_of.assign(lat.dim, 0);
  const std::size_t ng = 4 * lat.L;
  for (std::size_t s = 0; s < lat.dim; ++s) {
    if (o.rep_of[s] >= 0) continue;
    const std::int32_t id = static_cast<std::int32_t>(o.reps.size());
    o.reps.push_back(s);
    o.stab.emplace_back();
    for (std::size_t e = 0; e < ng; ++e) {
      const std::size_t t = lat.act(e, s);
      if (t == s) o.stab.back().push_back(static_cast<std::uint16_t>(e));
      if (o.rep_of[t] < 0) {
        o.rep_of[t] = id;
        o.g_of[t] = static_cast<std::uint16_t>(e);
      }
    }
  }
  return o;
}

struct Character {
  std::size_t L;
  int k;       // momentum, T_site eigenvalue exp(2 pi i k / L)
  int s1, s2;  // X-string charges, +-1
  cdbl operator()(std::size_t e) const {
    const std::size_t m = e % L, ab = e / L;
    cdbl v = std::polar(1.0, 2.0 * M_PI * k * static_cast<double>(m) / L);
    if (ab & 1u) v *= s1;
    if (ab & 2u) v *= s2;
    return v;
  }
};

// energy-degenerate index clusters of an ascending list, optionally refined
// by an extra real label
std::vector<std::vector<std::size_t>> clusters(const std::vector<double>& e,
                                               const std::vector<double>* extra) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double tol = 1e-8 * (1.0 + std::abs(e[i]));
    bool merged = false;
    if (!out.empty()) {
      const std::size_t j = out.back().back();
      if (std::abs(e[i] - e[j]) < tol &&
          (!extra || std::abs((*extra)[i] - (*extra)[j]) < 1e-6))
        merged = true;
    }
    if (merged)
      out.back().push_back(i);
    else
      out.push_back({i});
  }
  return out;
}

}  // namespace

Tensor dense_hamiltonian(double a, double b, double c, std::size_t L,
                         std::size_t cap_dim) {
  const Lattice lat(L);
  if (lat.dim > cap_dim) throw std::invalid_argument("dense_hamiltonian: cap exceeded");
  Tensor H({lat.dim, lat.dim});
  for (std::size_t s = 0; s < lat.dim; ++s) {
    double diag = 0;
    for (std::size_t q = 0; q < lat.n; ++q) {
      diag += -(b / 2) * lat.zval(s, q) * lat.zval(s, q + 2);
      H.data()[lat.flip(s, q) * lat.dim + s] += -(a / 2);
      H.data()[lat.flip(s, q + 1) * lat.dim + s] +=
          -(c / 2) * lat.zval(s, q) * lat.zval(s, q + 2);
    }
    H.data()[s * lat.dim + s] += diag;
  }
  return H;
}

std::vector<double> u001_diagonal(std::size_t L) {
  const Lattice lat(L);
  std::vector<double> d(lat.dim);
  for (std::size_t s = 0; s < lat.dim; ++s) d[s] = lat.u001(s);
  return d;
}

SpectrumTable lowest_states(double a, double b, double c, std::size_t L,
                            std::size_t k) {
  const Lattice lat(L);
  const Orbits orb = build_orbits(lat);
  const bool u3_good = std::abs(a - c) < 1e-12;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  SpectrumTable table;
  table.L = L;
  table.a = a;
  table.b = b;
  table.c = c;

  for (int s2 = 1; s2 >= -1; s2 -= 2)
    for (int s1 = 1; s1 >= -1; s1 -= 2)
      for (int mom = 0; mom < static_cast<int>(L); ++mom) {
        const Character chi{L, mom, s1, s2};
        // orbit representatives whose stabilizer is in the character kernel
        std::vector<std::size_t> cand;
        for (std::size_t r = 0; r < orb.reps.size(); ++r) {
          cdbl sum(0, 0);
          for (std::uint16_t e : orb.stab[r]) sum += chi(e);
          if (std::abs(sum) > 0.5) cand.push_back(r);
        }
        if (cand.empty()) continue;

        // When a == c the CZ-circuit generator is conserved; it is diagonal
        // and constant on blocking-group orbits, so the block splits exactly
        // into its +-1 sectors (the label comes for free and the dense
        // eigensolves shrink). Otherwise keep the block whole.
        std::vector<std::pair<double, std::vector<std::size_t>>> sectors;
        if (u3_good) {
          sectors.push_back({1.0, {}});
          sectors.push_back({-1.0, {}});
          for (std::size_t r : cand) {
            const double d = lat.u001(orb.reps[r]);
            sectors[d > 0 ? 0 : 1].second.push_back(r);
          }
        } else {
          sectors.push_back({nan, cand});
        }

        for (const auto& [u3val, cols] : sectors) {
          if (cols.empty()) continue;
          const std::size_t B = cols.size();
          std::vector<std::int32_t> loc(orb.reps.size(), -1);
          for (std::size_t p = 0; p < B; ++p)
            loc[cols[p]] = static_cast<std::int32_t>(p);

          Tensor H({B, B});
          auto scatter = [&](std::size_t col, std::size_t state, double coeff) {
            const std::int32_t r2 = orb.rep_of[state];
            if (loc[r2] < 0) return;  // vanishing or other-sector target
            const double w = std::sqrt(static_cast<double>(orb.stab[r2].size()) /
                                       static_cast<double>(orb.stab[cols[col]].size()));
            H.data()[static_cast<std::size_t>(loc[r2]) * B + col] +=
                coeff * w * chi(orb.g_of[state]);
          };
          for (std::size_t col = 0; col < B; ++col) {
            const std::size_t s = orb.reps[cols[col]];
            double diag = 0;
            for (std::size_t q = 0; q < lat.n; ++q) {
              diag += -(b / 2) * lat.zval(s, q) * lat.zval(s, q + 2);
              scatter(col, lat.flip(s, q), -(a / 2));
              scatter(col, lat.flip(s, q + 1),
                      -(c / 2) * lat.zval(s, q) * lat.zval(s, q + 2));
            }
            H.data()[col * B + col] += diag;
          }
          if (distance(H, dagger(H)) > 1e-9 * (1.0 + H.norm()))
            throw std::runtime_error("lowest_states: block not Hermitian");

          HermEig eig = eig_hermitian(H);
          const Tensor& V = eig.vectors;

          // one-spin translation maps the (s1, s2) block to (s2, s1) and
          // commutes with the CZ generator: it is a good label on the
          // charge-symmetric blocks, resolved inside degenerate clusters
          std::vector<cdbl> th(B, cdbl(nan, nan));
          if (s1 == s2) {
            Tensor Th({B, B});
            for (std::size_t col = 0; col < B; ++col) {
              const std::size_t t = lat.translate(orb.reps[cols[col]], 1);
              const std::int32_t r2 = orb.rep_of[t];
              if (loc[r2] < 0)
                throw std::runtime_error("lowest_states: broken half step");
              const double w = std::sqrt(static_cast<double>(orb.stab[r2].size()) /
                                         static_cast<double>(orb.stab[cols[col]].size()));
              Th.data()[static_cast<std::size_t>(loc[r2]) * B + col] =
                  w * chi(orb.g_of[t]);
            }
            // only the states that can reach the global lowest-k list need
            // a resolved label; skip clusters fully above that horizon
            std::vector<std::vector<std::size_t>> keep;
            std::vector<std::size_t> need;
            std::vector<std::size_t> pos(B, 0);
            for (const auto& cl : clusters(eig.values, nullptr)) {
              if (cl.front() >= std::min(B, k)) continue;
              keep.push_back(cl);
              for (std::size_t i : cl) {
                pos[i] = need.size();
                need.push_back(i);
              }
            }
            Tensor Vn({B, need.size()});
            for (std::size_t p = 0; p < B; ++p)
              for (std::size_t j = 0; j < need.size(); ++j)
                Vn.data()[p * need.size() + j] = V.data()[p * B + need[j]];
            const Tensor ThV = matmul(Th, Vn);
            for (const auto& cl : keep) {
              const std::size_t m = cl.size();
              Tensor M({m, m});
              for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                  cdbl z(0, 0);
                  for (std::size_t p = 0; p < B; ++p)
                    z += std::conj(V.data()[p * B + cl[i]]) *
                         ThV.data()[p * need.size() + pos[cl[j]]];
                  M.data()[i * m + j] = z;
                }
              if (m == 1) {
                th[cl[0]] = M.data()[0];
              } else {
                std::vector<EigPair> sub = eig_dense(M, m);
                for (std::size_t j = 0; j < m; ++j) th[cl[j]] = sub[j].value;
              }
            }
          }

          for (std::size_t i = 0; i < B && i < k; ++i) {
            SpectrumEntry ent;
            ent.energy = eig.values[i];
            ent.u100 = s1;
            ent.u010 = s2;
            ent.u001 = u3val;
            ent.momentum = mom;
            ent.thalf = th[i];
            table.states.push_back(ent);
          }
        }
      }

  std::sort(table.states.begin(), table.states.end(),
            [](const SpectrumEntry& x, const SpectrumEntry& y) {
              return x.energy < y.energy;
            });
  if (table.states.size() > k) table.states.resize(k);
  return table;
}

double ground_energy(double a, double b, double c, std::size_t L) {
  return lowest_states(a, b, c, L, 1).states.at(0).energy;
}

void rescaled_levels(SpectrumTable& table, double delta_ref) {
  if (table.states.empty()) throw std::invalid_argument("rescaled_levels: empty table");
  const double e0 = table.states.front().energy;
  double e1 = 0;
  bool found = false;
  for (const SpectrumEntry& s : table.states)
    if (s.energy > e0 + 1e-9 * (1.0 + std::abs(e0))) {
      e1 = s.energy;
      found = true;
      break;
    }
  if (!found) throw std::runtime_error("rescaled_levels: no gap in table");
  for (SpectrumEntry& s : table.states)
    s.rescaled = delta_ref * (s.energy - e0) / (e1 - e0);
}

LinearFit fit_inverse_length(const std::vector<std::pair<std::size_t, double>>& pts) {
  if (pts.size() < 2)
    throw std::invalid_argument("fit_inverse_length: need at least two sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [L, y] : pts) {
    const double x = 1.0 / static_cast<double>(L);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  double ss = 0;
  for (const auto& [L, y] : pts) {
    const double r = y - fit.intercept - fit.slope / static_cast<double>(L);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

std::vector<LinearFit> extrapolate_levels(
    const std::vector<SpectrumTable>& tables,
    const std::function<bool(const SpectrumEntry&)>& select,
    std::size_t max_levels) {
  if (tables.size() < 2)
    throw std::invalid_argument("extrapolate_levels: need at least two sizes");
  std::vector<std::vector<double>> levels(tables.size());
  std::size_t m = max_levels;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    for (const SpectrumEntry& s : tables[t].states)
      if (select(s)) levels[t].push_back(s.rescaled);
    m = std::min(m, levels[t].size());
  }
  std::vector<LinearFit> out;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::pair<std::size_t, double>> pts;
    for (std::size_t t = 0; t < tables.size(); ++t)
      pts.emplace_back(tables[t].L, levels[t][i]);
    out.push_back(fit_inverse_length(pts));
  }
  return out;
}

LinearFit extrapolated_density(double a, double b, double c,
                               const std::vector<std::size_t>& Ls) {
  std::vector<std::pair<std::size_t, double>> pts;
  for (std::size_t L : Ls)
    pts.emplace_back(L, ground_energy(a, b, c, L) / static_cast<double>(L));
  return fit_inverse_length(pts);
}

double smallest_dimension(double b) {
  const double x = 2.0 * b / (b - 3.0);
  if (x < -1.0 || x >= 1.0)
    throw std::invalid_argument("smallest_dimension: coupling outside critical line");
  const double r2 = M_PI / (2.0 * std::acos(x));
  return std::min(1.0 / r2, r2 / 4.0);
}

}  // namespace tnsym
