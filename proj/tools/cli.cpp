#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "fewbody/errors.hpp"
#include "fewbody/oracle.hpp"
#include "fewbody/solve.hpp"
#include "tables.hpp"

namespace fewbody::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Flags shared by every command that produces a result file.
struct Output {
  std::string path;
  std::string format = "json";
  std::uint64_t seed = 1;
  bool timing = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string energy_text(double v) { return fmt("%.6g", v); }
std::string number_text(double v) { return fmt("%.10g", v); }

/// Positive number or "inf".
double parse_positive(const std::string& s, const std::string& what) {
  if (s == "inf" || s == "infinity") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": not a number: '" + s + "'");
  }
  if (used != s.size() || !(v > 0.0)) throw UsageError(what + ": expected a positive number, got '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> v;
  for (const auto& item : split(s, ',')) v.push_back(parse_positive(item, what));
  if (v.empty()) throw UsageError(what + ": empty list");
  return v;
}

void check_grid(double lo, double hi, int points, const std::string& what) {
  if (!(lo > 0.0) || !(hi > lo)) throw UsageError(what + ": need 0 < lo < hi");
  if (points < 2) throw UsageError(what + ": need at least two points");
}

Json spec_json(const SystemSpec& spec) {
  Json j;
  if (spec.z_central) j["z"] = *spec.z_central;
  j["inv_masses"] = spec.inv_masses;
  if (!spec.is_four_body()) {
    j["epsilon"] = spec.epsilon;
    j["sector"] = spec.sector == Sector::kUnnatural ? "unnatural" : "natural";
  } else {
    j["charges"] = spec.charges;
  }
  return j;
}

Json meta_json(const std::string& command, const Json& spec, const Output& o, double seconds) {
  Json m;
  m["command"] = command;
  m["spec"] = spec;
  m["seed"] = o.seed;
  m["version"] = kVersion;
  if (o.timing) m["wall_time_s"] = seconds;
  return m;
}

Json result_json(const VariationalResult& r, Json meta) {
  Json j;
  j["energy"] = six_digits(r.energy);
  j["params"] = r.params;
  j["coeffs"] = r.coeffs;
  j["virial_ratio"] = r.virial_ratio;
  j["threshold"] = {{"label", r.threshold.label},
                    {"energy", six_digits(r.threshold_energy)},
                    {"mu", r.threshold.mu}};
  j["margin"] = r.margin;
  j["stable"] = r.stable;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["meta"] = std::move(meta);
  return j;
}

/// "# key: value" lines carrying the metadata block of a CSV file.
std::string csv_meta(const Json& meta) {
  std::string s;
  for (const auto& [key, value] : meta.items())
    s += "# " + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  return s;
}

std::string result_csv(const VariationalResult& r, const Json& meta) {
  std::string params;
  for (std::size_t i = 0; i < r.params.size(); ++i) params += (i ? ";" : "") + number_text(r.params[i]);
  std::string s = csv_meta(meta);
  s += "energy,virial_ratio,threshold,margin,stable,iterations,converged,params\n";
  s += energy_text(r.energy) + "," + number_text(r.virial_ratio) + "," + energy_text(r.threshold_energy) + "," +
       number_text(r.margin) + "," + (r.stable ? "true" : "false") + "," + std::to_string(r.iterations) + "," +
       (r.converged ? "true" : "false") + "," + params + "\n";
  return s;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  out << text;
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int finish_result(const std::string& command, const SystemSpec& spec, const VariationalResult& r, const Output& o,
                  double seconds, std::ostream& out, std::ostream& err) {
  const Json meta = meta_json(command, spec_json(spec), o, seconds);
  const std::string text = o.format == "csv" ? result_csv(r, meta) : result_json(r, meta).dump(2) + "\n";
  emit(text, o.path, out);
  if (!r.converged) {
    err << command << ": minimizer did not converge\n";
    return kNotConverged;
  }
  return kOk;
}

void add_output_flags(CLI::App* cmd, Output& o, bool with_format) {
  cmd->add_option("--seed", o.seed, "Seed for stochastic restarts");
  cmd->add_option("--out", o.path, "Also write the result to this file");
  if (with_format) cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--timing", o.timing, "Record wall time in the metadata block");
}

// ---------------------------------------------------------------------- ion

struct IonArgs {
  double z = 1.0;
  std::string spin = "singlet";
  int terms = 1;
  std::string mass_ratio = "inf";
  std::string sector = "natural";
  std::string family;
  int root = 0;
  Output out;
};

solve::IonFamily parse_family(const std::string& s) {
  if (s == "fixed") return solve::IonFamily::kFixedCharge;
  if (s == "effective") return solve::IonFamily::kEffectiveCharge;
  if (s == "equal") return solve::IonFamily::kEqualCorrelated;
  if (s == "chandrasekhar") return solve::IonFamily::kChandrasekhar;
  return solve::IonFamily::kFull;
}

int cmd_ion(const IonArgs& a, std::ostream& out, std::ostream& err) {
  const double ratio = parse_positive(a.mass_ratio, "--mass-ratio");
  const Sector sector = a.sector == "unnatural" ? Sector::kUnnatural : Sector::kNatural;
  const int epsilon = a.spin == "singlet" ? +1 : -1;
  SystemSpec spec;
  try {
    spec = SystemSpec::three_body(a.z, std::isinf(ratio) ? 0.0 : 1.0 / ratio, 1.0, 1.0, epsilon, sector);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  solve::IonOptions o;
  o.n_terms = a.terms;
  o.root = a.root;
  o.config.seed = a.out.seed;
  if (a.root < 0 || a.root >= a.terms) throw UsageError("--root must be below --terms");
  const std::string family =
      !a.family.empty() ? a.family : (sector == Sector::kUnnatural || a.terms > 1 ? "full" : "chandrasekhar");
  o.family = parse_family(family);
  const auto t0 = std::chrono::steady_clock::now();
  const VariationalResult r = solve::optimize_ion(spec, o);
  return finish_result("ion", spec, r, a.out, seconds_since(t0), out, err);
}

// ----------------------------------------------------------------- molecule

struct MoleculeArgs {
  std::string mode = "ps2";
  double ratio = 1.0;
  std::string masses;
  Output out;
};

int cmd_molecule(const MoleculeArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.ratio > 0.0) || std::isinf(a.ratio)) throw UsageError("--ratio must be positive and finite");
  std::optional<SystemSpec> spec;
  if (!a.masses.empty()) {
    const auto m = parse_list(a.masses, "--masses");
    if (m.size() != 4) throw UsageError("--masses needs four values m1,m2,m3,m4");
    std::array<double, 4> inv{};
    for (int i = 0; i < 4; ++i) inv[i] = std::isinf(m[i]) ? 0.0 : 1.0 / m[i];
    if ((inv[0] == 0.0 || inv[1] == 0.0) && (inv[2] == 0.0 || inv[3] == 0.0))
      throw UsageError("--masses: at least one particle of each sign pair must be light");
    spec = SystemSpec::four_body(inv[0], inv[1], inv[2], inv[3]);
  }
  const auto t0 = std::chrono::steady_clock::now();
  if (a.mode == "ps2") {
    if (spec && !(spec->inv_masses[0] == spec->inv_masses[1] && spec->inv_masses[1] == spec->inv_masses[2] &&
                  spec->inv_masses[2] == spec->inv_masses[3] && spec->inv_masses[0] == 1.0))
      throw UsageError("--mode ps2 describes four unit masses; use identity-break or cc-break for others");
    const VariationalResult r = solve::optimize_ps2();
    return finish_result("molecule", SystemSpec::four_body(1, 1, 1, 1), r, a.out, seconds_since(t0), out, err);
  }
  const solve::BreakMode mode =
      a.mode == "identity-break" ? solve::BreakMode::kIdentity : solve::BreakMode::kChargeConjugation;
  const SystemSpec s = spec ? *spec : solve::mass4_spec(a.ratio, mode);
  solve::MinimizerConfig config;
  config.seed = a.out.seed;
  const VariationalResult r = solve::optimize_molecule(s, mode, {}, config);
  return finish_result("molecule", s, r, a.out, seconds_since(t0), out, err);
}

// --------------------------------------------------------------------- scan

struct ScanArgs {
  double z = 1.0;
  double b_lo = 0.02, b_hi = 1.0;  // frozen curve
  int nb = 50;
  double ca_lo = 0.2, ca_hi = 2.0, cb_lo = 0.05, cb_hi = 1.2;  // contour grid
  int na = 40, cnb = 40;
  std::string basis = "all";
  double z_lo = 0.5, z_hi = 2.0, tol = 1e-12;
  std::string ratios;
  std::string inv_masses = "1:1,1:0.5,1:2";
  std::string mode = "cc";
  Output out;
};

std::string csv_header(const std::string& command, const Json& spec, const Json& extra, const Output& o,
                       double seconds, const std::string& columns) {
  Json meta = meta_json(command, spec, o, seconds);
  for (const auto& [key, value] : extra.items()) meta[key] = value;
  return csv_meta(meta) + columns + "\n";
}

int cmd_scan(const std::string& sub, const ScanArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string body;
  std::string columns;
  Json spec;
  Json extra = Json::object();
  if (sub == "frozen") {
    check_grid(a.b_lo, a.b_hi, a.nb, "frozen grid");
    spec = spec_json(SystemSpec::atom(a.z));
    const auto scan = solve::scan_frozen(a.z, a.b_lo, a.b_hi, a.nb);
    columns = "b,energy";
    for (const auto& p : scan.curve) body += number_text(p.x) + "," + energy_text(p.energy) + "\n";
    extra["minimum"] = {{"b", scan.minimum.x}, {"energy", six_digits(scan.minimum.energy)}};
  } else if (sub == "contour") {
    check_grid(a.ca_lo, a.ca_hi, a.na, "contour a grid");
    check_grid(a.cb_lo, a.cb_hi, a.cnb, "contour b grid");
    spec = spec_json(SystemSpec::atom(a.z));
    const auto grid = solve::scan_contour(a.z, a.ca_lo, a.ca_hi, a.cb_lo, a.cb_hi, a.na, a.cnb);
    columns = "a,b,energy";
    for (std::size_t i = 0; i < grid.a.size(); ++i)
      for (std::size_t j = 0; j < grid.b.size(); ++j)
        body += number_text(grid.a[i]) + "," + number_text(grid.b[j]) + "," + energy_text(grid.energy[i][j]) + "\n";
  } else if (sub == "charge") {
    if (!(a.z_lo > 0.0) || !(a.z_hi > a.z_lo) || !(a.tol > 0.0)) throw UsageError("charge scan: need 0 < z-lo < z-hi, tol > 0");
    std::vector<std::pair<std::string, solve::ChargeBasis>> bases{
        {"chandrasekhar", solve::ChargeBasis::kChandrasekhar},
        {"effective", solve::ChargeBasis::kEffectiveCharge},
        {"perturbative", solve::ChargeBasis::kPerturbative}};
    columns = "basis,z_critical";
    spec = {{"z_lo", a.z_lo}, {"z_hi", a.z_hi}, {"tol", a.tol}};
    for (const auto& [name, basis] : bases) {
      if (a.basis != "all" && a.basis != name) continue;
      body += name + "," + fmt("%.6g", solve::scan_charge(basis, a.z_lo, a.z_hi, a.tol)) + "\n";
    }
  } else if (sub == "mass3") {
    const auto ratios = parse_list(a.ratios.empty() ? "1,10,1836,inf" : a.ratios, "--ratios");
    columns = "ratio,energy,scaled_reference,threshold,margin,hughes_eckart";
    spec = {{"ratios", ratios}};
    for (const auto& p : solve::scan_mass3(ratios))
      body += number_text(p.ratio) + "," + energy_text(p.energy) + "," + energy_text(p.scaled_reference) + "," +
              energy_text(p.threshold) + "," + number_text(p.margin) + "," + fmt("%.3g", p.hughes_eckart) + "\n";
  } else if (sub == "asym3") {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& item : split(a.inv_masses, ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 2) throw UsageError("--inv-masses: expected m1:m2 pairs, got '" + item + "'");
      pairs.emplace_back(parse_positive(parts[0], "--inv-masses"), parse_positive(parts[1], "--inv-masses"));
    }
    columns = "inv_m1,inv_m2,energy,symmetric_energy,threshold,margin,stable";
    spec = {{"inv_masses", a.inv_masses}};
    for (const auto& p : solve::scan_asym3(pairs))
      body += number_text(p.inv_m1) + "," + number_text(p.inv_m2) + "," + energy_text(p.energy) + "," +
              energy_text(p.symmetric_energy) + "," + energy_text(p.threshold) + "," + number_text(p.margin) + "," +
              (p.stable ? "true" : "false") + "\n";
  } else if (sub == "mass4") {
    const auto ratios = parse_list(a.ratios.empty() ? "1,2,10,100" : a.ratios, "--ratios");
    for (double r : ratios)
      if (std::isinf(r)) throw UsageError("--ratios: four-body ratios must be finite");
    const auto mode = a.mode == "identity" ? solve::BreakMode::kIdentity : solve::BreakMode::kChargeConjugation;
    columns = "ratio,energy,threshold,margin,stable";
    spec = {{"mode", a.mode}, {"ratios", ratios}};
    for (const auto& p : solve::scan_mass4(ratios, mode))
      body += number_text(p.ratio) + "," + energy_text(p.energy) + "," + energy_text(p.threshold) + "," +
              number_text(p.margin) + "," + (p.stable ? "true" : "false") + "\n";
  }
  emit(csv_header("scan " + sub, spec, extra, a.out, seconds_since(t0), columns) + body, a.out.path, out);
  return kOk;
}

// ------------------------------------------------------------------- tables

struct TablesArgs {
  int table = 0;
  std::string rows;
  Output out;
};

std::string cell_line(const Row& row, const Cell& c) {
  char buf[256];
  const std::string ref = c.reference ? energy_text(*c.reference) : "-";
  const std::string got = c.computed ? energy_text(*c.computed) : "-";
  const std::string dev = c.reference && c.computed ? fmt("%.1e", std::abs(*c.computed - *c.reference)) : "-";
  const char* status = !c.checked() ? (c.computed ? "info" : "not-computed") : (c.passed() ? "ok" : "MISS");
  std::snprintf(buf, sizeof buf, "%-15s %-12s %12s %12s %9s  %s\n", row.label.c_str(), c.column.c_str(), ref.c_str(),
                got.c_str(), dev.c_str(), status);
  return buf;
}

int cmd_tables(const TablesArgs& a, std::ostream& out) {
  auto rows = table_rows(a.table, a.rows);
  if (rows.empty()) throw UsageError("--rows '" + a.rows + "' matches no row of table " + std::to_string(a.table));
  compute_rows(rows, a.out.seed);
  char head[256];
  std::snprintf(head, sizeof head, "%-15s %-12s %12s %12s %9s  %s\n", "row", "column", "reference", "computed",
                "|dev|", "status");
  std::string text = head;
  bool ok = true;
  for (const auto& r : rows)
    for (const auto& c : r.cells) {
      text += cell_line(r, c);
      ok = ok && c.passed();
    }
  emit(text, a.out.path, out);
  return ok ? kOk : kToleranceFail;
}

// ----------------------------------------------------------------- validate

int cmd_validate(const std::string& filter, const std::string& path, std::ostream& out) {
  const auto reports = oracle::run_validation(filter);
  if (reports.empty()) throw UsageError("--filter '" + filter + "' matches no validation case");
  std::string text;
  bool ok = true;
  for (const auto& r : reports) {
    text += oracle::format_report(r) + "\n";
    ok = ok && r.passed;
  }
  emit(text, path, out);
  return ok ? kOk : kToleranceFail;
}

}  // namespace

double six_digits(double value) {
  if (!std::isfinite(value)) return value;
  return std::stod(energy_text(value));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational few-body Coulomb solver"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);

  IonArgs ion;
  auto* c_ion = app.add_subcommand("ion", "Two electrons around a central charge");
  c_ion->add_option("--z", ion.z, "Central charge")->check(CLI::PositiveNumber);
  c_ion->add_option("--spin", ion.spin, "Electron spin")->check(CLI::IsMember({"singlet", "triplet"}));
  c_ion->add_option("--terms", ion.terms, "Basis size")->check(CLI::Range(1, solve::kMaxTerms));
  c_ion->add_option("--mass-ratio", ion.mass_ratio, "Central to electron mass ratio, or inf");
  c_ion->add_option("--sector", ion.sector, "Parity sector")->check(CLI::IsMember({"natural", "unnatural"}));
  c_ion->add_option("--family", ion.family, "Single-term family")
      ->check(CLI::IsMember({"fixed", "effective", "equal", "chandrasekhar", "full"}));
  c_ion->add_option("--root", ion.root, "0 for the lowest level, 1 for the next")->check(CLI::Range(0, 1));
  add_output_flags(c_ion, ion.out, true);

  MoleculeArgs mol;
  auto* c_mol = app.add_subcommand("molecule", "Two positive and two negative unit charges");
  c_mol->add_option("--mode", mol.mode, "Basis and mass pattern")
      ->check(CLI::IsMember({"ps2", "identity-break", "cc-break"}));
  c_mol->add_option("--ratio", mol.ratio, "M/m at fixed average inverse mass");
  c_mol->add_option("--masses", mol.masses, "Explicit masses m1,m2,m3,m4 (+,+,-,-)");
  add_output_flags(c_mol, mol.out, true);

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "Curves and grids as CSV");
  c_scan->require_subcommand(1, 1);
  auto* s_frozen = c_scan->add_subcommand("frozen", "E(a = Z, b) curve");
  s_frozen->add_option("--z", scan.z, "Central charge")->check(CLI::PositiveNumber);
  s_frozen->add_option("--b-lo", scan.b_lo, "Lowest b");
  s_frozen->add_option("--b-hi", scan.b_hi, "Highest b");
  s_frozen->add_option("--points", scan.nb, "Number of b values");
  auto* s_contour = c_scan->add_subcommand("contour", "E(a, b) grid");
  s_contour->add_option("--z", scan.z, "Central charge")->check(CLI::PositiveNumber);
  s_contour->add_option("--a-lo", scan.ca_lo, "Lowest a");
  s_contour->add_option("--a-hi", scan.ca_hi, "Highest a");
  s_contour->add_option("--b-lo", scan.cb_lo, "Lowest b");
  s_contour->add_option("--b-hi", scan.cb_hi, "Highest b");
  s_contour->add_option("--na", scan.na, "Number of a values");
  s_contour->add_option("--nb", scan.cnb, "Number of b values");
  auto* s_charge = c_scan->add_subcommand("charge", "Critical central charge per basis");
  s_charge->add_option("--basis", scan.basis, "Basis family")
      ->check(CLI::IsMember({"all", "chandrasekhar", "effective", "perturbative"}));
  s_charge->add_option("--z-lo", scan.z_lo, "Lower end of the charge bracket");
  s_charge->add_option("--z-hi", scan.z_hi, "Upper end of the charge bracket");
  s_charge->add_option("--tol", scan.tol, "Bisection tolerance in Z");
  auto* s_mass3 = c_scan->add_subcommand("mass3", "(M+, m-, m-) energy against M/m");
  s_mass3->add_option("--ratios", scan.ratios, "Comma-separated M/m values, inf allowed");
  auto* s_asym3 = c_scan->add_subcommand("asym3", "(inf, m1, m2) stability");
  s_asym3->add_option("--inv-masses", scan.inv_masses, "Comma-separated 1/m1:1/m2 pairs");
  auto* s_mass4 = c_scan->add_subcommand("mass4", "Four-body symmetry breaking against M/m");
  s_mass4->add_option("--mode", scan.mode, "Which symmetry is broken")->check(CLI::IsMember({"identity", "cc"}));
  s_mass4->add_option("--ratios", scan.ratios, "Comma-separated M/m values");
  for (auto* s : {s_frozen, s_contour, s_charge, s_mass3, s_asym3, s_mass4}) add_output_flags(s, scan.out, false);

  TablesArgs tab;
  auto* c_tab = app.add_subcommand("tables", "Computed against published table values");
  c_tab->add_option("--table", tab.table, "1 (charge series) or 2 (basis series)")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  c_tab->add_option("--rows", tab.rows, "Row label filter, substring or glob");
  c_tab->add_option("--out", tab.out.path, "Also write the table to this file");
  c_tab->add_option("--seed", tab.out.seed, "Seed for stochastic restarts");

  std::string filter;
  std::string validate_out;
  auto* c_val = app.add_subcommand("validate", "Analytic elements against quadrature");
  c_val->add_option("--filter", filter, "Case name substring or glob");
  c_val->add_option("--out", validate_out, "Also write the report to this file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_ion->parsed()) return cmd_ion(ion, out, err);
    if (c_mol->parsed()) return cmd_molecule(mol, out, err);
    if (c_scan->parsed()) {
      for (auto* s : c_scan->get_subcommands())
        if (s->parsed()) return cmd_scan(s->get_name(), scan, out);
    }
    if (c_tab->parsed()) return cmd_tables(tab, out);
    if (c_val->parsed()) return cmd_validate(filter, validate_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kNotConverged;
  }
  return kUsage;
}

}  // namespace fewbody::cli
