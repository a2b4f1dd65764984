#include "stratspace/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace stratspace {

namespace {

struct Level {
  std::vector<double> w, t, var, m3;
};

// Subcells of one raster cell with their inside-area weights.
template <typename Fn>
void for_subcells(const Stratification& s, std::size_t idx, int q, Fn&& fn) {
  const Raster& r = s.raster();
  const Rect cell = r.cell_rect(idx);
  const double dw = cell.width() / q, dh = cell.height() / q;
  const bool full = r.fraction[idx] >= 1.0;
  for (int j = 0; j < q; ++j) {
    for (int i = 0; i < q; ++i) {
      const Rect sub{cell.xmin + i * dw, cell.ymin + j * dh, cell.xmin + (i + 1) * dw,
                     cell.ymin + (j + 1) * dh};
      const double w = full ? dw * dh : clipped_area(s.region(), sub);
      if (w > 0.0) fn(Point{sub.xmin + 0.5 * dw, sub.ymin + 0.5 * dh}, w);
    }
  }
}

Level midpoint_level(const AttributeField& f, const Stratification& s, int q) {
  const int n = s.size();
  Level L{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
          std::vector<double>(n)};
  std::vector<double> ys, ws;
  for (int st = 0; st < n; ++st) {
    ys.clear();
    ws.clear();
    for (std::size_t idx : s.cells(st)) {
      for_subcells(s, idx, q, [&](Point p, double w) {
        ys.push_back(f(p));
        ws.push_back(w);
      });
    }
    double w = 0.0, t = 0.0;
    for (std::size_t k = 0; k < ys.size(); ++k) {
      w += ws[k];
      t += ws[k] * ys[k];
    }
    const double mean = t / w;
    double v = 0.0, m3 = 0.0;
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const double d = std::abs(ys[k] - mean);
      v += ws[k] * d * d;
      m3 += ws[k] * d * d * d;
    }
    L.w[st] = w;
    L.t[st] = t;
    L.var[st] = v / w;
    L.m3[st] = m3 / w;
  }
  return L;
}

double relative_error(double abs_err, const MomentTable& m) {
  const double scale = std::max(std::abs(m.t), std::sqrt(std::max(0.0, m.domain_area() * m.s)));
  return scale > 0.0 ? abs_err / scale : 0.0;
}

MomentTable indicator_moments(const AttributeField& f, const Stratification& s, int q) {
  const Region& b = *f.metadata().indicator;
  const double v = f.metadata().indicator_value;
  const Raster& r = s.raster();
  MomentTable m;
  m.exact_indicator = true;
  const int n = s.size();
  double partial_err = 0.0;
  for (int st = 0; st < n; ++st) {
    double inside = 0.0;
    for (std::size_t idx : s.cells(st)) {
      if (r.fraction[idx] >= 1.0) {
        inside += clipped_area(b, r.cell_rect(idx));
      } else {
        // Cell cut by the domain boundary: indicator integrated on subcells.
        double coarse = 0.0, fine = 0.0;
        for_subcells(s, idx, q, [&](Point p, double w) { coarse += contains(b, p) ? w : 0.0; });
        for_subcells(s, idx, 2 * q, [&](Point p, double w) { fine += contains(b, p) ? w : 0.0; });
        inside += fine;
        partial_err += std::abs(fine - coarse);
      }
    }
    const double a = s.area(st);
    double p = std::clamp(inside / a, 0.0, 1.0);
    if (p < 1e-12) p = 0.0;
    if (p > 1.0 - 1e-12) p = 1.0;
    m.area_i.push_back(a);
    m.t_i.push_back(v * p * a);
    m.s_i.push_back(v * v * p * a);
    m.var_i.push_back(v * v * p * (1.0 - p));
    m.m3_i.push_back(std::abs(v * v * v) * p * (1.0 - p) * ((1.0 - p) * (1.0 - p) + p * p));
  }
  for (int st = 0; st < n; ++st) {
    m.t += m.t_i[st];
    m.s += m.s_i[st];
  }
  m.error_estimate = relative_error(std::abs(v) * partial_err, m);
  return m;
}

}  // namespace

double MomentTable::domain_area() const {
  double a = 0.0;
  for (double x : area_i) a += x;
  return a;
}

double MomentTable::domain_variance() const {
  const double a = domain_area();
  const double mean = t / a;
  double v = 0.0;
  for (std::size_t i = 0; i < area_i.size(); ++i) {
    const double d = t_i[i] / area_i[i] - mean;
    v += area_i[i] * (var_i[i] + d * d);
  }
  return v / a;
}

MomentTable moments(const AttributeField& f, const Stratification& s, int resolution) {
  if (resolution < 256) throw OracleError("quadrature resolution must be at least 256");
  const Raster& r = s.raster();
  const int q = std::max(1, (resolution + std::max(r.nx, r.ny) - 1) / std::max(r.nx, r.ny));
  const auto& meta = f.metadata();
  const bool rough = meta.smoothness == SmoothnessClass::piecewise_holder ||
                     meta.smoothness == SmoothnessClass::indicator ||
                     meta.smoothness == SmoothnessClass::line_intercept;

  MomentTable m;
  if (meta.indicator) {
    m = indicator_moments(f, s, q);
  } else {
    const Level c = midpoint_level(f, s, q);
    const Level d = midpoint_level(f, s, 2 * q);
    double abs_err = 0.0;
    for (int st = 0; st < s.size(); ++st) {
      const double a = s.area(st);
      const double ti = (4.0 * d.t[st] - c.t[st]) / 3.0;
      const double vi = std::max(0.0, (4.0 * d.var[st] - c.var[st]) / 3.0);
      const double mean = ti / a;
      m.area_i.push_back(a);
      m.t_i.push_back(ti);
      m.var_i.push_back(vi);
      m.s_i.push_back(a * (vi + mean * mean));
      m.m3_i.push_back(d.m3[st]);
      abs_err += std::abs(d.t[st] - c.t[st]) / 3.0;
      m.t += ti;
      m.s += m.s_i.back();
    }
    m.error_estimate = relative_error(abs_err, m);
  }
  m.resolution = q * std::max(r.nx, r.ny);
  m.tolerance = rough ? 1e-4 : 1e-6;
  m.flagged = m.error_estimate > m.tolerance;
  return m;
}

double exact_var_urs(const MomentTable& m, int n) {
  if (n < 1) throw OracleError("URS variance needs n >= 1");
  const double a = m.domain_area();
  return a * a * m.domain_variance() / n;
}

double exact_var_ss(const MomentTable& m) {
  double v = 0.0;
  for (std::size_t i = 0; i < m.area_i.size(); ++i) v += m.area_i[i] * m.area_i[i] * m.var_i[i];
  return v;
}

double exact_var_ss2(const MomentTable& m) { return 0.5 * exact_var_ss(m); }

double bias_naive(const MomentTable& m) {
  const std::size_t n = m.t_i.size();
  if (n < 2) throw OracleError("naive bias needs n >= 2");
  const double share = m.t / static_cast<double>(n);
  double b = 0.0;
  for (double ti : m.t_i) b += (ti - share) * (ti - share);
  return static_cast<double>(n) / static_cast<double>(n - 1) * b;
}

double bias_neighbor(const MomentTable& m, std::span<const int> order) {
  if (order.size() != m.t_i.size()) throw OracleError("order must cover every stratum");
  const double first = m.t_i[order.front()], last = m.t_i[order.back()];
  double b = first * first + last * last;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const double d = m.t_i[order[i]] - m.t_i[order[i + 1]];
    b += d * d;
  }
  return 0.5 * b;
}

std::optional<HolderBound> holder_bound_check(const AttributeField& f, const Stratification& s,
                                              const MomentTable& m) {
  const auto& meta = f.metadata();
  if (!meta.holder_h) return std::nullopt;
  const double h = *meta.holder_h;
  const double dn = diagnostics(s).d_n;
  HolderBound hb;
  hb.bound = h * h * std::pow(dn, 2.0 + 2.0 * meta.alpha) * m.domain_area();
  hb.sigma2 = exact_var_ss(m);
  hb.satisfied = hb.sigma2 <= hb.bound * (1.0 + 1e-9) + 1e-300;
  return hb;
}

std::optional<double> lyapunov_ratio(const MomentTable& m) {
  const double sigma2 = exact_var_ss(m);
  if (!(sigma2 > 0.0)) return std::nullopt;
  double vn = 0.0;
  for (std::size_t i = 0; i < m.area_i.size(); ++i) {
    vn += m.area_i[i] * m.area_i[i] * m.area_i[i] * m.m3_i[i];
  }
  return vn / std::pow(sigma2, 1.5);
}

namespace {

double sgs_variance_level(const AttributeField& f, const Rect& frame, int k, int q) {
  const double cw = frame.width() / k, ch = frame.height() / k;
  const double ca = cw * ch;
  std::vector<double> totals;
  totals.reserve(static_cast<std::size_t>(q) * q);
  for (int j = 0; j < q; ++j) {
    for (int i = 0; i < q; ++i) {
      const double ux = (i + 0.5) * cw / q, uy = (j + 0.5) * ch / q;
      double t = 0.0;
      for (int cy = 0; cy < k; ++cy) {
        for (int cx = 0; cx < k; ++cx) {
          t += extended_eval(f, {frame.xmin + cx * cw + ux, frame.ymin + cy * ch + uy});
        }
      }
      totals.push_back(ca * t);
    }
  }
  double mean = 0.0;
  for (double t : totals) mean += t;
  mean /= static_cast<double>(totals.size());
  double v = 0.0;
  for (double t : totals) v += (t - mean) * (t - mean);
  return v / static_cast<double>(totals.size());
}

}  // namespace

double sgs_variance(const AttributeField& f, const Rect& frame, int k, int q) {
  if (k < 1 || q < 1) throw OracleError("SGS variance needs k >= 1 and q >= 1");
  const double coarse = sgs_variance_level(f, frame, k, q);
  const double fine = sgs_variance_level(f, frame, k, 2 * q);
  return std::max(0.0, (4.0 * fine - coarse) / 3.0);
}

}  // namespace stratspace
