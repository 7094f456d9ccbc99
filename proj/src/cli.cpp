#include "ldorb/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ldorb/closure3.hpp"
#include "ldorb/errors.hpp"
#include "ldorb/factorization.hpp"
#include "ldorb/forms.hpp"
#include "ldorb/sampling.hpp"
#include "ldorb/strata.hpp"
#include "ldorb/sunits.hpp"
#include "ldorb/weyl.hpp"

namespace ldorb {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::ConfigInvalid, msg); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing key '") + key + "'");
  return j.at(key);
}

Rational rational_of(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  bad("expected a rational string \"p/q\", got " + j.dump());
}

Real real_of(const json& j) {
  if (j.is_number()) return Real(j.get<double>());
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s.find('/') != std::string::npos) return to_real(parse_rational(s));
    try {
      return Real(s);
    } catch (const std::exception&) {
      bad("malformed real '" + s + "'");
    }
  }
  bad("expected a real, got " + j.dump());
}

std::vector<Rational> rationals_of(const json& j) {
  if (!j.is_array()) bad("expected an array of rationals, got " + j.dump());
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_of(x));
  return out;
}

// Coordinate array in the power basis, or a single rational.
FieldElement element_of(const NumberField& k, const json& j) {
  if (!j.is_array()) return k.from_rational(rational_of(j));
  auto c = rationals_of(j);
  if (static_cast<int>(c.size()) != k.degree())
    bad("element " + j.dump() + " needs " + std::to_string(k.degree()) + " coordinates");
  return k.element(c);
}

MatrixK matrix_of(const NumberField& k, int n, const json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) bad("matrix must have " + std::to_string(n) + " rows");
  MatrixK m(k, n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n)
      bad("matrix row must have " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) m(i, c) = element_of(k, j[i][c]);
  }
  return m;
}

std::vector<Rational> reversed(std::vector<Rational> v) { return {v.rbegin(), v.rend()}; }

struct Context {
  NumberField k = NumberField::rationals();
  std::optional<PlaceSet> places;
  std::optional<CmWitness> witness;
  std::optional<std::vector<FieldElement>> units;
  int n = 2;
  int workers = 1;
  std::uint64_t seed = 1;
  std::optional<int> height;
  json budgets = json::object();
};

Context context_of(const json& cfg, const CliOverrides& over) {
  Context c;
  const json& f = need(cfg, "field");
  int precision = over.precision.value_or(f.value("precision", NumberField::kDefaultPrecisionBits));
  if (cfg.contains("budgets")) {
    c.budgets = cfg.at("budgets");
    if (!over.precision && c.budgets.contains("precision")) precision = c.budgets.at("precision").get<int>();
  }
  std::optional<std::vector<std::vector<Rational>>> basis;
  if (f.contains("integral_basis")) {
    basis.emplace();
    for (const auto& b : f.at("integral_basis")) basis->push_back(rationals_of(b));
  }
  c.k = NumberField::create(reversed(rationals_of(need(f, "minpoly"))), precision, basis);
  if (f.contains("cm_witness")) {
    const auto& w = f.at("cm_witness");
    c.witness = CmWitness{reversed(rationals_of(need(w, "subfield_minpoly"))), rationals_of(need(w, "d"))};
  }
  if (f.contains("units")) {
    c.units.emplace();
    for (const auto& u : f.at("units")) c.units->push_back(element_of(c.k, u));
  }
  if (cfg.contains("places")) {
    std::vector<Place> ps;
    for (const auto& p : cfg.at("places")) {
      auto kind = need(p, "kind").get<std::string>();
      if (kind == "real")
        ps.push_back(Place::real(p.value("index", 0)));
      else if (kind == "complex")
        ps.push_back(Place::complex(p.value("index", 0)));
      else if (kind == "finite")
        ps.push_back(Place::finite(need(p, "prime").get<unsigned long>()));
      else
        bad("unknown place kind '" + kind + "'");
    }
    c.places.emplace(c.k, ps);
  } else {
    c.places.emplace(PlaceSet::archimedean(c.k));
  }
  c.n = cfg.value("n", 2);
  if (c.n < 1 || c.n > 8) bad("n must lie in [1, 8]");
  c.workers = over.workers.value_or(cfg.value("workers", 1));
  if (c.workers < 1) bad("workers must be positive");
  c.seed = over.seed.value_or(cfg.value("seed", std::uint64_t{1}));
  if (over.height)
    c.height = over.height;
  else if (c.budgets.contains("height"))
    c.height = c.budgets.at("height").get<int>();
  return c;
}

std::vector<MatrixK> matrices_per_place(const Context& c, const json& job) {
  const json& g = need(job, "g");
  if (!g.is_array() || g.size() != c.places->size())
    bad("job needs one matrix per place (" + std::to_string(c.places->size()) + ")");
  std::vector<MatrixK> out;
  for (const auto& m : g) out.push_back(matrix_of(c.k, c.n, m));
  return out;
}

std::vector<std::string> strs(const std::vector<FieldElement>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

json matrix_json(const MatrixK& m) {
  json rows = json::array();
  for (int i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.size(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

double dbl(const Real& x) { return static_cast<double>(x); }

JobOutput stratify(const Context& c, const json& job) {
  if (c.places->size() != 2) bad("stratify needs exactly two places");
  auto g = matrices_per_place(c, job);
  auto p = closure_poset(g[0], g[1], c.workers);
  JobOutput out;
  json strata = json::array();
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    const auto& pair = p.nodes[i].pair;
    bool closed = std::find(p.closed_nodes.begin(), p.closed_nodes.end(), static_cast<int>(i)) != p.closed_nodes.end();
    strata.push_back({{"index", i},
                      {"label", pair.label()},
                      {"w1", pair.w1.str()},
                      {"psi", pair.psi.str()},
                      {"w2", pair.w2.str()},
                      {"left_flag", pair.left_flag.str()},
                      {"right_flag", pair.right_flag.str()},
                      {"closed", closed},
                      {"core", matrix_json(p.nodes[i].core)}});
  }
  auto pairs = [](const std::vector<std::pair<int, int>>& e) {
    json a = json::array();
    for (auto [x, y] : e) a.push_back({x, y});
    return a;
  };
  out.report["strata"] = strata;
  out.report["strata_count"] = p.nodes.size();
  out.report["closed_count"] = p.closed_nodes.size();
  out.report["top"] = p.top;
  out.report["edges"] = pairs(p.edges);
  out.report["hasse"] = pairs(p.hasse);
  out.report["bound_total"] = p.bound_total.get_str();
  out.report["bound_closed"] = p.bound_closed.get_str();
  out.report["orbit_closed"] = is_orbit_closed(g);
  out.report["generic_position"] = generic_position(g[0] * g[1].inverse());
  out.dot = poset_to_dot(p);
  return out;
}

JobOutput predict_closure(const Context& c, const json& job) {
  auto g = matrices_per_place(c, job);
  auto cm = is_cm_field(c.k, c.witness);
  std::uint64_t budget = c.budgets.value("tuples", std::uint64_t{2000000});
  auto pred = maximize_centralizer(g, cm, budget, c.workers);
  JobOutput out;
  json omegas = json::array(), h = json::array();
  for (const auto& w : pred.omegas) omegas.push_back(w.str());
  for (const auto& m : pred.h) h.push_back(matrix_json(m));
  out.report = {{"partition", pred.partition.str()},
                {"omegas", omegas},
                {"h", h},
                {"max_dim", pred.max_dim},
                {"dense", pred.dense},
                {"orbit_closed", pred.orbit_closed},
                {"cm", to_string(pred.cm_guard)},
                {"tuples_searched", pred.tuples_searched},
                {"warnings", pred.warnings}};
  return out;
}

json log_matrix_json(const UnitGroup& u) {
  json a = json::array();
  for (const auto& row : u.log_matrix) {
    json r = json::array();
    for (const auto& x : row) r.push_back(dbl(x));
    a.push_back(r);
  }
  return a;
}

JobOutput units(const Context& c, const json& job) {
  auto u = unit_group_build(*c.places, c.units);
  auto mode = job.value("mode", std::string("classify"));
  JobOutput out;
  out.report["fundamental_units"] = strs(u.fundamental_units);
  out.report["torsion_order"] = u.torsion_order;
  out.report["log_matrix"] = log_matrix_json(u);
  if (mode == "classify") {
    int v = job.value("place", 0);
    if (v < 0 || v >= static_cast<int>(c.places->size())) bad("place index out of range");
    ClosureOptions opt;
    opt.cm = is_cm_field(c.k, c.witness);
    if (c.budgets.contains("closure_height")) opt.height_bound = c.budgets.at("closure_height").get<double>();
    auto cl = unit_closure_classify(u, (*c.places)[v], opt);
    auto ints = [](const std::vector<std::vector<Integer>>& rows) {
      json a = json::array();
      for (const auto& r : rows) {
        json x = json::array();
        for (const auto& e : r) x.push_back(e.get_str());
        a.push_back(x);
      }
      return a;
    };
    out.report["verdict"] = to_string(cl.kind);
    out.report["identity_component_dim"] = cl.identity_component_dim;
    out.report["relation_rank"] = cl.relation_rank;
    out.report["relations"] = ints(cl.relations);
    out.report["certificate_margin"] = cl.certificate_margin;
    out.report["notes"] = cl.notes;
    if (cl.kind == ClosureKind::Spiral) out.report["direction"] = {cl.alpha, cl.beta};
    if (cl.witness)
      out.report["witness"] = {{"elements", ints(cl.witness->elements)},
                               {"min_return", cl.witness->min_return},
                               {"max_gap", cl.witness->max_gap},
                               {"multiples", cl.witness->multiples}};
  } else if (mode == "reduce") {
    std::vector<Real> a;
    for (const auto& x : need(job, "target")) a.push_back(real_of(x));
    auto r = unit_reduce(a, u, job.value("m", 1));
    json red = json::array();
    for (const auto& x : r.reduced) red.push_back(dbl(x));
    out.report["exponents"] = r.exponents;
    out.report["kappa"] = dbl(r.kappa);
    out.report["reduced"] = red;
  } else {
    bad("unknown units mode '" + mode + "'");
  }
  return out;
}

DecomposableForm form_of(const Context& c, const json& job) {
  const json& fs = need(job, "forms");
  if (!fs.is_array() || fs.size() != c.places->size()) bad("forms needs one family per place");
  int n_vars = job.value("n_vars", c.n);
  std::vector<std::vector<std::vector<FieldElement>>> forms;
  for (const auto& fam : fs) {
    std::vector<std::vector<FieldElement>> rows;
    for (const auto& row : fam) {
      if (!row.is_array() || static_cast<int>(row.size()) != n_vars) bad("each linear form needs n_vars coefficients");
      std::vector<FieldElement> r;
      for (const auto& x : row) r.push_back(element_of(c.k, x));
      rows.push_back(r);
    }
    forms.push_back(rows);
  }
  std::optional<std::vector<FieldElement>> alpha;
  if (job.contains("alpha")) {
    alpha.emplace();
    for (const auto& x : job.at("alpha")) alpha->push_back(element_of(c.k, x));
  }
  return DecomposableForm(*c.places, n_vars, forms, alpha);
}

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

JobOutput forms(const Context& c, const json& job) {
  auto f = form_of(c, job);
  auto mode = job.value("mode", std::string("probe"));
  int height = c.height.value_or(job.value("height", 10));
  if (height < 0) bad("height must be non-negative");
  JobOutput out;
  out.report["proportional"] = proportionality_test(f);
  if (mode == "probe") {
    const json& t = need(job, "target");
    const json& e = need(job, "epsilon");
    if (t.size() != c.places->size() || e.size() != c.places->size()) bad("target and epsilon need one entry per place");
    std::vector<PlaceTarget> target;
    std::vector<double> eps;
    for (std::size_t v = 0; v < t.size(); ++v) {
      PlaceTarget pt{{0, 0}, Rational(0)};
      if ((*c.places)[v].archimedean()) {
        if (t[v].is_object())
          pt.value = {dbl(real_of(need(t[v], "re"))), dbl(real_of(t[v].value("im", json("0"))))};
        else
          pt.value = {dbl(real_of(t[v])), 0};
      } else {
        pt.finite = rational_of(t[v]);
      }
      target.push_back(pt);
      eps.push_back(dbl(real_of(e[v])));
    }
    DensityOptions opt;
    opt.workers = c.workers;
    opt.stop_at_first = job.value("stop_at_first", true);
    opt.cm = is_cm_field(c.k, c.witness);
    if (c.budgets.contains("points")) opt.budget = c.budgets.at("points").get<std::uint64_t>();
    auto r = density_probe(f, target, eps, height, opt);
    out.report["height"] = height;
    out.report["points_scanned"] = r.points_scanned;
    out.report["best_distance"] = r.best_distance;
    out.report["best_point"] = strs(r.best_point);
    out.report["witness"] = r.witness ? json(strs(*r.witness)) : json(nullptr);
    out.report["warnings"] = r.warnings;
    std::ostringstream csv;
    csv << "kind";
    for (int j = 0; j < f.n_vars(); ++j) csv << ",z" << j + 1;
    csv << ",distance\n";
    if (!r.best_point.empty()) {
      csv << (r.witness ? "witness" : "best");
      for (const auto& x : r.best_point) csv << ',' << x.str();
      csv << ',' << fmt12(r.best_distance) << '\n';
    }
    out.csv = csv.str();
  } else if (mode == "scan") {
    auto elems = small_integers(*c.places, height);
    std::uint64_t budget = c.budgets.value("points", std::uint64_t{1000000});
    double total = std::pow(static_cast<double>(elems.size()), f.n_vars());
    if (total > static_cast<double>(budget))
      throw Error(ErrorKind::BudgetExceeded, "scan needs " + fmt12(total) + " points");
    std::ostringstream csv;
    for (int j = 0; j < f.n_vars(); ++j) csv << (j ? "," : "") << 'z' << j + 1;
    for (std::size_t v = 0; v < c.places->size(); ++v) {
      if ((*c.places)[v].archimedean())
        csv << ",v" << v << "_re,v" << v << "_im";
      else
        csv << ",v" << v;
    }
    csv << '\n';
    std::vector<std::size_t> idx(f.n_vars(), 0);
    std::uint64_t rows = 0, zeros = 0;
    while (!elems.empty()) {
      std::vector<FieldElement> z;
      for (auto i : idx) z.push_back(elems[i]);
      for (std::size_t j = 0; j < z.size(); ++j) csv << (j ? "," : "") << z[j].str();
      bool zero = false;
      for (std::size_t v = 0; v < c.places->size(); ++v) {
        auto val = f.evaluate(static_cast<int>(v), z);
        zero = zero || val.is_zero();
        const Place& p = (*c.places)[v];
        if (p.archimedean()) {
          auto x = c.k.embed_double(val, p.root_index(c.k));
          csv << ',' << fmt12(x.real()) << ',' << fmt12(x.imag());
        } else {
          csv << ',' << val.str();
        }
      }
      csv << '\n';
      ++rows;
      zeros += zero;
      std::size_t j = idx.size();
      while (j > 0 && ++idx[j - 1] == elems.size()) idx[--j] = 0;
      if (j == 0) break;
    }
    out.csv = csv.str();
    out.report["height"] = height;
    out.report["points"] = rows;
    out.report["zero_points"] = zeros;
    if (c.places->size() == 2) {
      auto d = two_place_diagnostic(f, height);
      out.report["two_place"] = {{"points", d.points},
                                 {"nonzero_values", d.nonzero_values},
                                 {"distinct_values", d.distinct_values},
                                 {"min_gap", d.min_gap},
                                 {"window", d.window}};
    }
  } else if (mode == "cm-check") {
    if (!c.witness) bad("cm-check needs field.cm_witness");
    auto cm = cm_structure(c.k, *c.witness);
    int l = job.value("l", 1);
    auto s = cm_bound_scan(f, cm, height, l, c.workers);
    out.report["height"] = height;
    out.report["points"] = s.points;
    out.report["product_bound"] = s.product_bound;
    out.report["common_line"] = s.common_line;
    out.report["excluded"] = s.excluded;
    out.report["violations"] = s.violations;
    out.report["min_product"] = s.min_product;
    out.report["violating"] = s.violating;
    if (s.violations > 0)
      throw TheoremViolation(ErrorKind::InternalError,
                             std::to_string(s.violations) + " points violate both the product bound and the common line");
  } else {
    bad("unknown forms mode '" + mode + "'");
  }
  return out;
}

JobOutput systole(const Context& c, const json& job) {
  auto g = matrices_per_place(c, job);
  std::vector<TorusStep> path;
  for (const auto& st : need(job, "path")) {
    TorusStep t;
    t.parameter = st.value("parameter", 0.0);
    for (const auto& place : need(st, "log_abs")) {
      std::vector<Real> row;
      for (const auto& x : place) row.push_back(real_of(x));
      if (static_cast<int>(row.size()) != c.n) bad("log_abs rows need n entries");
      t.log_abs.push_back(row);
    }
    if (t.log_abs.size() != c.places->size()) bad("log_abs needs one row per place");
    path.push_back(t);
  }
  int height = c.height.value_or(job.value("height", 10));
  std::uint64_t budget = c.budgets.value("points", std::uint64_t{50000000});
  auto rep = systole_scan(*c.places, g, path, height, budget, c.workers);
  JobOutput out;
  json steps = json::array();
  std::ostringstream csv;
  csv << "step,parameter,systole\n";
  for (const auto& r : rep) {
    steps.push_back({{"step", r.step}, {"parameter", r.parameter}, {"systole", r.systole}, {"argmin", r.argmin}});
    csv << r.step << ',' << fmt12(r.parameter) << ',' << fmt12(r.systole) << '\n';
  }
  out.report["height"] = height;
  out.report["steps"] = steps;
  out.csv = csv.str();
  return out;
}

JobOutput verify(const Context& c, const json& job) {
  auto suite = need(job, "suite").get<std::string>();
  JobOutput out;
  out.report["suite"] = suite;
  if (suite == "cell-conditions") {
    std::uint64_t cases = 0, both = 0;
    for (int n = 1; n <= c.n; ++n)
      for (const auto& psi : PsiSet::all(n))
        for (const auto& w : WeylPerm::all(n)) {
          auto r = cell_conditions(w, psi);
          ++cases;
          both += r.cond_i;
        }
    out.report["cases"] = cases;
    out.report["equivalent_true"] = both;
    out.report["mismatches"] = 0;
  } else if (suite == "factorization") {
    Rng rng(c.seed);
    int count = job.value("count", 100);
    std::uint64_t fails = 0;
    for (int i = 0; i < count; ++i) {
      auto g = random_sl(c.k, c.n, rng);
      auto b = bruhat(g);
      bool ok = b.b1 * b.w.matrix(c.k) * b.b2 == g && in_bruhat_cell(g, b.w);
      auto psi = PsiSet(c.n, static_cast<std::uint32_t>(rng() % (1u << (c.n - 1))));
      auto rb = relative_bruhat(g, psi);
      ok = ok && rb.w.matrix(c.k) * rb.z * rb.v_plus * rb.v_minus == g;
      fails += !ok;
    }
    out.report["cases"] = count;
    out.report["failures"] = fails;
    if (fails) throw TheoremViolation(ErrorKind::InternalError, "factorization did not reconstruct its input");
  } else {
    bad("unknown verify suite '" + suite + "'");
  }
  return out;
}

void round_floats(json& j) {
  if (j.is_number_float()) {
    double x = j.get<double>();
    if (!std::isfinite(x)) {
      j = nullptr;
      return;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    j = std::strtod(buf, nullptr);
  } else if (j.is_structured()) {
    for (auto& x : j) round_floats(x);
  }
}

}  // namespace

std::string canonical_dump(const json& j) {
  json copy = j;
  round_floats(copy);
  return copy.dump(2) + "\n";
}

JobOutput run_job(const json& config, const CliOverrides& over) {
  Context c = context_of(config, over);
  const json& job = need(config, "job");
  auto type = need(job, "type").get<std::string>();
  JobOutput out;
  if (type == "stratify")
    out = stratify(c, job);
  else if (type == "predict-closure")
    out = predict_closure(c, job);
  else if (type == "units")
    out = units(c, job);
  else if (type == "forms")
    out = forms(c, job);
  else if (type == "systole")
    out = systole(c, job);
  else if (type == "verify")
    out = verify(c, job);
  else
    bad("unknown job type '" + type + "'");
  out.report["schema"] = kReportSchema;
  out.report["job"] = type;
  out.report["status"] = "ok";
  out.report["seed"] = c.seed;
  out.report["field"] = {{"degree", c.k.degree()},
                         {"real_places", c.k.real_places()},
                         {"complex_places", c.k.complex_places()},
                         {"precision_bits", c.k.precision_bits()}};
  json places = json::array();
  for (const auto& p : c.places->places()) places.push_back(p.label());
  out.report["places"] = places;
  return out;
}

int run_cli(const std::string& config_path, const std::string& out_dir, const CliOverrides& over, std::ostream& err) {
  namespace fs = std::filesystem;
  auto write = [&](const std::string& name, const std::string& text) {
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / name, std::ios::binary) << text;
  };
  auto fail = [&](const Error& e, int code) {
    err << e.what() << "\n";
    json r = {{"schema", kReportSchema},
              {"status", code == 2 ? "alarm" : "error"},
              {"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
    write("report.json", canonical_dump(r));
    return code;
  };
  try {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot read config '" + config_path + "'");
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ConfigInvalid, e.what());
    }
    JobOutput out;
    try {
      out = run_job(cfg, over);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ConfigInvalid, e.what());
    }
    write("report.json", canonical_dump(out.report));
    if (!out.dot.empty()) write("strata.dot", out.dot);
    if (!out.csv.empty()) write("scan.csv", out.csv);
    return 0;
  } catch (const TheoremViolation& e) {
    return fail(e, 2);
  } catch (const Error& e) {
    return fail(e, 1);
  }
}

}  // namespace ldorb
