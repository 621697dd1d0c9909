#include "maspline/bernstein.hpp"

#include <cmath>
#include <cstring>

namespace maspline {

std::array<int, 3> bb_multi_index(int d, int idx) {
  for (int i = d; i >= 0; --i) {
    int m = d - i;
    int base = m * (m + 1) / 2;
    if (idx < base + m + 1) {
      int k = idx - base;
      return {i, d - i - k, k};
    }
  }
  throw Error("bb_multi_index: index out of range");
}

void bernstein_values(int d, const std::array<double, 3>& b, double* out) {
  // degree-raising recurrence B^t = b1 B^{t-1}_{-e1} + b2 ... ; exactly the
  // de Casteljau triangle run upward, which keeps all values nonnegative for
  // points inside the triangle
  out[0] = 1.0;
  std::vector<double> prev(n_basis(d));
  for (int t = 1; t <= d; ++t) {
    std::memcpy(prev.data(), out, sizeof(double) * n_basis(t - 1));
    for (int i = t; i >= 0; --i)
      for (int k = 0; k + i <= t; ++k) {
        int j = t - i - k;
        double v = 0.0;
        if (i > 0) v += b[0] * prev[bb_index(t - 1, i - 1, j, k)];
        if (j > 0) v += b[1] * prev[bb_index(t - 1, i, j - 1, k)];
        if (k > 0) v += b[2] * prev[bb_index(t - 1, i, j, k - 1)];
        out[bb_index(t, i, j, k)] = v;
      }
  }
}

std::vector<double> bernstein_values(int d, const std::array<double, 3>& b) {
  std::vector<double> out(n_basis(d));
  bernstein_values(d, b, out.data());
  return out;
}

TriGeometry tri_geometry(const std::array<Vec2, 3>& verts) {
  TriGeometry g;
  g.verts = verts;
  double a2 = cross(verts[1] - verts[0], verts[2] - verts[0]);
  g.area = 0.5 * a2;
  auto perp = [a2](Vec2 from, Vec2 to) {
    return Vec2{(from.y - to.y) / a2, (to.x - from.x) / a2};
  };
  g.bgrad = {perp(verts[1], verts[2]), perp(verts[2], verts[0]),
             perp(verts[0], verts[1])};
  return g;
}

EvalResult eval_bezier(int d, const double* c, const std::array<Vec2, 3>& verts,
                       const std::array<double, 3>& b) {
  EvalResult res;
  TriGeometry geom = tri_geometry(verts);
  const auto& gl = geom.bgrad;

  if (d == 0) {
    res.value = c[0];
    return res;
  }

  // de Casteljau: one step lowers the net degree by one,
  //   c'_beta = b1 c_{beta+e1} + b2 c_{beta+e2} + b3 c_{beta+e3}
  std::vector<double> cur(c, c + n_basis(d)), nxt;
  auto step = [&](int t) {
    nxt.assign(n_basis(t - 1), 0.0);
    for (int i = t - 1; i >= 0; --i)
      for (int k = 0; k + i <= t - 1; ++k) {
        int j = t - 1 - i - k;
        nxt[bb_index(t - 1, i, j, k)] =
            b[0] * cur[bb_index(t, i + 1, j, k)] +
            b[1] * cur[bb_index(t, i, j + 1, k)] +
            b[2] * cur[bb_index(t, i, j, k + 1)];
      }
    cur.swap(nxt);
  };

  for (int t = d; t > 2; --t) step(t);

  if (d >= 2) {
    // degree-2 net: second directional derivatives are
    // d(d-1) * c2[e_m + e_n], assembled with the coordinate gradients
    static const int idx2[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    double s = static_cast<double>(d) * (d - 1);
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n) {
        double w = s * cur[idx2[m][n]];
        res.hess.a11 += w * gl[m].x * gl[n].x;
        res.hess.a12 += w * gl[m].x * gl[n].y;
        res.hess.a22 += w * gl[m].y * gl[n].y;
      }
    step(2);
  }

  // degree-1 net: gradient = d * sum_m Dl_m c1[e_m]
  for (int m = 0; m < 3; ++m) res.grad = res.grad + (d * cur[m]) * gl[m];
  step(1);
  res.value = cur[0];
  return res;
}

BasisTable make_basis_table(int d, TriQuadRule rule) {
  BasisTable tbl;
  tbl.d = d;
  tbl.nb = n_basis(d);
  tbl.rule = std::move(rule);
  const int nq = tbl.rule.size();

  tbl.val.resize(static_cast<size_t>(nq) * tbl.nb);
  if (d >= 1) tbl.val1.resize(static_cast<size_t>(nq) * n_basis(d - 1));
  if (d >= 2) tbl.val2.resize(static_cast<size_t>(nq) * n_basis(d - 2));
  for (int q = 0; q < nq; ++q) {
    const auto& p = tbl.rule.points[q];
    bernstein_values(d, p, tbl.val.data() + static_cast<size_t>(q) * tbl.nb);
    if (d >= 1)
      bernstein_values(d - 1, p,
                       tbl.val1.data() + static_cast<size_t>(q) * n_basis(d - 1));
    if (d >= 2)
      bernstein_values(d - 2, p,
                       tbl.val2.data() + static_cast<size_t>(q) * n_basis(d - 2));
  }

  tbl.down1.resize(tbl.nb);
  tbl.down2.resize(tbl.nb);
  for (int a = 0; a < tbl.nb; ++a) {
    auto mi = bb_multi_index(d, a);
    for (int m = 0; m < 3; ++m) {
      std::array<int, 3> s = mi;
      s[m] -= 1;
      tbl.down1[a][m] =
          (d >= 1 && s[m] >= 0) ? bb_index(d - 1, s[0], s[1], s[2]) : -1;
      for (int n = 0; n < 3; ++n) {
        std::array<int, 3> s2 = s;
        s2[n] -= 1;
        tbl.down2[a][3 * m + n] =
            (d >= 2 && s2[0] >= 0 && s2[1] >= 0 && s2[2] >= 0)
                ? bb_index(d - 2, s2[0], s2[1], s2[2])
                : -1;
      }
    }
  }
  return tbl;
}

void basis_gradients_at(int d, const TriGeometry& geom,
                        const std::array<double, 3>& b, Vec2* grads) {
  const int nb = n_basis(d);
  if (d == 0) {
    grads[0] = Vec2{0.0, 0.0};
    return;
  }
  std::vector<double> low = bernstein_values(d - 1, b);
  const auto& gl = geom.bgrad;
  for (int a = 0; a < nb; ++a) {
    auto mi = bb_multi_index(d, a);
    Vec2 g{0.0, 0.0};
    for (int m = 0; m < 3; ++m) {
      std::array<int, 3> s = mi;
      s[m] -= 1;
      if (s[m] >= 0)
        g = g + (d * low[bb_index(d - 1, s[0], s[1], s[2])]) * gl[m];
    }
    grads[a] = g;
  }
}

void basis_at_point(const BasisTable& tbl, const TriGeometry& geom, int q,
                    double* values, Vec2* grads, Sym2* hessians) {
  const int nb = tbl.nb;
  const int d = tbl.d;
  const auto& gl = geom.bgrad;
  const double* v = tbl.val.data() + static_cast<size_t>(q) * nb;
  if (values) std::memcpy(values, v, sizeof(double) * nb);

  if (grads) {
    const double* v1 = tbl.val1.data() + static_cast<size_t>(q) * n_basis(d - 1);
    for (int a = 0; a < nb; ++a) {
      Vec2 g{0.0, 0.0};
      if (d >= 1)
        for (int m = 0; m < 3; ++m) {
          int ix = tbl.down1[a][m];
          if (ix >= 0) g = g + (d * v1[ix]) * gl[m];
        }
      grads[a] = g;
    }
  }

  if (hessians) {
    const double* v2 =
        d >= 2 ? tbl.val2.data() + static_cast<size_t>(q) * n_basis(d - 2)
               : nullptr;
    double s = static_cast<double>(d) * (d - 1);
    for (int a = 0; a < nb; ++a) {
      Sym2 h;
      if (d >= 2)
        for (int m = 0; m < 3; ++m)
          for (int n = 0; n < 3; ++n) {
            int ix = tbl.down2[a][3 * m + n];
            if (ix < 0) continue;
            double w = s * v2[ix];
            h.a11 += w * gl[m].x * gl[n].x;
            h.a12 += w * gl[m].x * gl[n].y;
            h.a22 += w * gl[m].y * gl[n].y;
          }
      hessians[a] = h;
    }
  }
}

}  // namespace maspline
