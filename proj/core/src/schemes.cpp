#include "stratspace/schemes.hpp"

#include <string>

namespace stratspace {

namespace {

// Child index reserved for the lattice shift of randomized TSS.
constexpr std::uint64_t kShiftStream = 0xFFFFFFFFull;

SamplePlan base_plan(Scheme scheme, const RandomStream& stream) {
  SamplePlan p;
  p.scheme = scheme;
  p.seed = stream.root_seed();
  p.path.assign(stream.path().begin(), stream.path().end());
  return p;
}

void check_frame(const Region& a, const Rect& frame, int k) {
  if (k < 1) throw SchemeError("tessellation needs k >= 1");
  const Rect& b = a.bounding_box();
  const double tol = a.tolerance();
  if (b.xmin < frame.xmin - tol || b.ymin < frame.ymin - tol || b.xmax > frame.xmax + tol ||
      b.ymax > frame.ymax + tol) {
    throw SchemeError("tessellation frame must contain the region");
  }
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::urs: return "URS";
    case Scheme::ss1: return "SS1";
    case Scheme::ss2: return "SS2";
    case Scheme::tss: return "TSS";
    case Scheme::sgs: return "SGS";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  std::string up(name);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Scheme s : {Scheme::urs, Scheme::ss1, Scheme::ss2, Scheme::tss, Scheme::sgs}) {
    if (up == to_string(s)) return s;
  }
  return std::nullopt;
}

Rect Tessellation::cell(int index) const {
  const int i = index % cells_x, j = index / cells_x;
  const double x0 = origin.x + i * cell_w, y0 = origin.y + j * cell_h;
  return {x0, y0, x0 + cell_w, y0 + cell_h};
}

SamplePlan draw_urs(const Region& a, int n, const RandomStream& stream) {
  if (n < 1) throw SchemeError("URS needs n >= 1");
  SamplePlan p = base_plan(Scheme::urs, stream);
  p.nominal_n = n;
  p.realized_in_domain = n;
  p.sites.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    RandomStream sub = stream.child(static_cast<std::uint64_t>(i));
    p.sites.push_back({uniform_point(a, sub), -1, true});
  }
  return p;
}

SamplePlan draw_ss1(const Stratification& s, const RandomStream& stream) {
  SamplePlan p = base_plan(Scheme::ss1, stream);
  p.nominal_n = s.size();
  p.realized_in_domain = s.size();
  p.sites.reserve(static_cast<std::size_t>(s.size()));
  for (int i = 0; i < s.size(); ++i) {
    RandomStream sub = stream.child(static_cast<std::uint64_t>(i));
    p.sites.push_back({s.sample(i, sub), i, true});
  }
  return p;
}

SamplePlan draw_ss2(const Stratification& s, const RandomStream& stream) {
  SamplePlan p = base_plan(Scheme::ss2, stream);
  p.nominal_n = 2 * s.size();
  p.realized_in_domain = p.nominal_n;
  p.sites.reserve(static_cast<std::size_t>(p.nominal_n));
  for (int i = 0; i < s.size(); ++i) {
    RandomStream sub = stream.child(static_cast<std::uint64_t>(i));
    const Point v1 = s.sample(i, sub);
    const Point v2 = s.sample(i, sub);
    p.sites.push_back({v1, i, true});
    p.sites.push_back({v2, i, true});
  }
  return p;
}

SamplePlan draw_tss(const Region& a, const Rect& frame, int k, const RandomStream& stream,
                    bool random_shift) {
  check_frame(a, frame, k);
  SamplePlan p = base_plan(Scheme::tss, stream);
  Tessellation t{{frame.xmin, frame.ymin}, frame.width() / k, frame.height() / k, k, k};
  if (random_shift) {
    RandomStream shift = stream.child(kShiftStream);
    const double ux = shift.uniform() * t.cell_w, uy = shift.uniform() * t.cell_h;
    t.origin = {frame.xmin - t.cell_w + ux, frame.ymin - t.cell_h + uy};
    t.cells_x = t.cells_y = k + 1;
  }
  p.nominal_n = k * k;
  p.tessellation = t;
  const int cells = t.cells_x * t.cells_y;
  p.sites.reserve(static_cast<std::size_t>(cells));
  for (int c = 0; c < cells; ++c) {
    RandomStream sub = stream.child(static_cast<std::uint64_t>(c));
    const Rect r = t.cell(c);
    const double ux = sub.uniform(), uy = sub.uniform();
    const Point q{r.xmin + ux * t.cell_w, r.ymin + uy * t.cell_h};
    const bool in = contains(a, q);
    p.realized_in_domain += in;
    p.sites.push_back({q, c, in});
  }
  return p;
}

SamplePlan draw_sgs(const Region& a, const Rect& frame, int k, const RandomStream& stream) {
  check_frame(a, frame, k);
  SamplePlan p = base_plan(Scheme::sgs, stream);
  const Tessellation t{{frame.xmin, frame.ymin}, frame.width() / k, frame.height() / k, k, k};
  p.nominal_n = k * k;
  p.tessellation = t;
  RandomStream sub = stream.child(0);
  const double ux = sub.uniform() * t.cell_w, uy = sub.uniform() * t.cell_h;
  for (int c = 0; c < k * k; ++c) {
    const Point q{t.origin.x + (c % k) * t.cell_w + ux, t.origin.y + (c / k) * t.cell_h + uy};
    const bool in = contains(a, q);
    p.realized_in_domain += in;
    p.sites.push_back({q, c, in});
  }
  return p;
}

}  // namespace stratspace
