#include <fnmatch.h>

#include <cmath>
#include <cstdio>
#include <future>

#include "fewbody/matel3.hpp"
#include "fewbody/matel4.hpp"
#include "fewbody/oracle.hpp"

namespace fewbody::oracle {

namespace {

using matel3::BasisFn3;
using matel3::PairElements;

double xyz(double x, double y, double z) { return x * y * z; }

// Memoized quadrature of all elements of one three-body pair, shared by the
// per-element cases.
std::shared_future<PairElements> deferred3(BasisFn3 f, BasisFn3 g, Sector sector) {
  return std::async(std::launch::deferred, [=] { return quad_pair_elements3(f, g, sector); }).share();
}

std::shared_future<QuadElements4> deferred4(ExpTerm4 t, ExpTerm4 tp) {
  return std::async(std::launch::deferred, [=] { return quad_pair_elements4(t, tp); }).share();
}

void add_pair3(std::vector<ValidationCase>& cases, const std::string& prefix, const BasisFn3& f, const BasisFn3& g,
               Sector sector) {
  const auto quad = deferred3(f, g, sector);
  const auto exact = std::make_shared<PairElements>(matel3::pair_elements(f, g, sector));
  const std::pair<const char*, double PairElements::*> fields[] = {
      {"overlap", &PairElements::overlap}, {"inv_r1", &PairElements::inv_r1}, {"inv_r2", &PairElements::inv_r2},
      {"inv_r12", &PairElements::inv_r12}, {"grad1", &PairElements::grad1},   {"grad2", &PairElements::grad2},
      {"grad12", &PairElements::grad12}};
  for (const auto& [name, member] : fields) {
    cases.push_back({prefix + "." + name, "three-body element against Cartesian finite-difference quadrature",
                     [exact, member] { return (*exact).*member; }, [quad, member] { return quad.get().*member; },
                     1e-8});
  }
}

std::vector<ValidationCase> build() {
  std::vector<ValidationCase> c;
  c.push_back({"quad3.f3_unit", "F3(1,1,1) = 1/2", [] { return matel3::f3(1, 1, 1); },
               [] { return quad3_monomial(0, 0, 0, {1, 1, 1}).value; }, 1e-9});
  c.push_back({"quad3.g3_111", "moment x y z at ranges (2,2,2)", [] { return matel3::g3({1, 1, 1}, 2, 2, 2); },
               [] { return quad3_monomial(1, 1, 1, {2, 2, 2}).value; }, 1e-8});
  c.push_back({"quad3.g3_mixed", "moment x^3 z^2 at ranges (1.3,0.7,-0.2)",
               [] { return matel3::g3({3, 0, 2}, 1.3, 0.7, -0.2); },
               [] { return quad3_monomial(3, 0, 2, {1.3, 0.7, -0.2}).value; }, 1e-8});

  // Min-max function exp(-a min(r1,r2) - b max(r1,r2)) at (a, b) = (1, 0.3).
  constexpr double a = 1.0, b = 0.3, z = 1.0;
  const std::array<double, 3> lower{2 * a, 2 * b, 0.0}, upper{2 * b, 2 * a, 0.0};
  c.push_back({"quad3.minmax_norm", "min-max normalization", [=] { return matel3::minmax_ntv(a, b, z).n; },
               [=] { return quad3_split(xyz, lower, xyz, upper).value; }, 1e-8});
  c.push_back({"quad3.minmax_kinetic", "min-max kinetic energy", [=] { return matel3::minmax_ntv(a, b, z).t; },
               [=] {
                 auto f = [=](double x, double y, double w) { return 0.5 * (a * a + b * b) * x * y * w; };
                 return quad3_split(f, lower, f, upper).value;
               },
               1e-8});
  c.push_back({"quad3.minmax_potential", "min-max potential energy", [=] { return matel3::minmax_ntv(a, b, z).v; },
               [=] {
                 auto f = [=](double x, double y, double w) { return (-z / x - z / y + 1.0 / w) * x * y * w; };
                 return quad3_split(f, lower, f, upper).value;
               },
               1e-8});

  BasisFn3 f = matel3::symmetrized({1.2, 0.4, 0.1}, +1);
  BasisFn3 g = matel3::symmetrized({0.9, 0.3, -0.05}, +1);
  g[0].prefactor = Poly3(1.0) + 0.3 * Poly3::z();
  add_pair3(c, "matel3.natural", f, g, Sector::kNatural);
  add_pair3(c, "matel3.unnatural", matel3::symmetrized({1.1, 0.35, 0.05}, -1), matel3::plain({0.8, 0.45, 0.0}),
            Sector::kUnnatural);

  auto inv_r12 = [](const Distances4& r) { return 1.0 / r.r12; };
  c.push_back({"quad4.f4_1212", "F4(1,2,1,2,0)", [] { return matel4::f4(1, 2, 1, 2, 0); },
               [=] { return quad4(inv_r12, 1, 2, 1, 2, 0).value; }, 1e-7});
  c.push_back({"quad4.f4_limit", "F4 on the a = b branch at (1,1,0.6,0.2,0)", [] { return matel4::f4(1, 1, 0.6, 0.2, 0); },
               [=] { return quad4(inv_r12, 1, 1, 0.6, 0.2, 0).value; }, 1e-7});
  c.push_back({"quad4.f4_u", "F4 with u > 0 at (0.8,0.5,0.9,0.3,0.4)", [] { return matel4::f4(0.8, 0.5, 0.9, 0.3, 0.4); },
               [=] { return quad4(inv_r12, 0.8, 0.5, 0.9, 0.3, 0.4).value; }, 1e-7});
  c.push_back({"quad4.norm", "normalization moment at (1,0.5,0.5,1)",
               [] { return matel4::g4({1, 1, 1, 1, 1}, 1.0, 0.5, 0.5, 1.0); },
               [] {
                 return quad4([](const Distances4& r) { return r.r13 * r.r23 * r.r14 * r.r24; }, 1.0, 0.5, 0.5, 1.0, 0)
                     .value;
               },
               1e-6});
  c.push_back({"quad4.v12", "<1/r12> moment at (1,0.5,0.5,1)",
               [] { return matel4::g4({1, 1, 1, 1, 0}, 1.0, 0.5, 0.5, 1.0); },
               [] {
                 return quad4([](const Distances4& r) { return r.r13 * r.r23 * r.r14 * r.r24 / r.r12; }, 1.0, 0.5, 0.5,
                              1.0, 0)
                     .value;
               },
               1e-6});
  c.push_back({"quad4.v13", "<1/r13> moment at (1,0.5,0.5,1)",
               [] { return matel4::g4({0, 1, 1, 1, 1}, 1.0, 0.5, 0.5, 1.0); },
               [] {
                 return quad4([](const Distances4& r) { return r.r23 * r.r14 * r.r24; }, 1.0, 0.5, 0.5, 1.0, 0).value;
               },
               1e-6});

  const ExpTerm4 t{0.7, 0.4, 0.5, 0.6}, tp{0.5, 0.3, 0.6, 0.8};
  const auto quad = deferred4(t, tp);
  const auto exact = std::make_shared<matel4::PairElements4>(matel4::pair_elements4(t, tp));
  c.push_back({"matel4.overlap", "four-body overlap", [=] { return exact->overlap; },
               [=] { return quad.get().overlap; }, 1e-7});
  c.push_back({"matel4.inv_r12", "four-body <1/r12>", [=] { return exact->inv_r12; },
               [=] { return quad.get().inv_r12; }, 1e-7});
  c.push_back({"matel4.inv_r34", "four-body <1/r34>", [=] { return exact->inv_r34; },
               [=] { return quad.get().inv_r34; }, 1e-7});
  c.push_back({"matel4.inv_r13", "four-body <1/r13>", [=] { return exact->inv_r13; },
               [=] { return quad.get().inv_r13; }, 1e-7});
  for (int i = 0; i < 4; ++i) {
    c.push_back({"matel4.grad" + std::to_string(i + 1), "four-body kinetic pattern against Cartesian gradients",
                 [=] { return exact->grad[i]; }, [=] { return quad.get().grad[i]; }, 1e-7});
  }

  c.push_back({"shell.e1_z2", "Gauss-theorem shell integral, 5Z/8 at Z=2", [] { return 5.0 * 2.0 / 8.0; },
               [] { return gauss_shell_e1(2.0); }, 1e-9});
  c.push_back({"shell.e1_z1", "Gauss-theorem shell integral, 5Z/8 at Z=1", [] { return 5.0 / 8.0; },
               [] { return gauss_shell_e1(1.0); }, 1e-9});
  return c;
}

}  // namespace

const std::vector<ValidationCase>& manifest() {
  static const std::vector<ValidationCase> cases = build();
  return cases;
}

bool case_matches(const std::string& name, const std::string& filter) {
  if (filter.empty()) return true;
  if (filter.find_first_of("*?[") == std::string::npos) return name.find(filter) != std::string::npos;
  // A glob matches the full name or any dotted suffix of it.
  for (std::size_t pos = 0; pos != std::string::npos;) {
    if (fnmatch(filter.c_str(), name.c_str() + pos, 0) == 0) return true;
    pos = name.find('.', pos);
    if (pos != std::string::npos) ++pos;
  }
  return false;
}

std::vector<CaseReport> run_validation(const std::string& filter) {
  std::vector<std::future<CaseReport>> jobs;
  for (const auto& vc : manifest()) {
    if (!case_matches(vc.name, filter)) continue;
    jobs.push_back(std::async(std::launch::async, [&vc] {
      CaseReport r;
      r.name = vc.name;
      r.tolerance = vc.tolerance;
      r.analytic = vc.analytic();
      r.quadrature = vc.quadrature();
      r.rel_error = std::abs(r.analytic - r.quadrature) / std::max(std::abs(r.analytic), 1e-300);
      r.passed = r.rel_error <= r.tolerance;
      return r;
    }));
  }
  std::vector<CaseReport> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

std::string format_report(const CaseReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %-28s analytic=%.12g quadrature=%.12g rel_err=%.2e tol=%.0e",
                r.passed ? "PASS" : "FAIL", r.name.c_str(), r.analytic, r.quadrature, r.rel_error, r.tolerance);
  return buf;
}

}  // namespace fewbody::oracle
