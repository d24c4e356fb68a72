#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "thsym/decomposition.hpp"
#include "thsym/forms.hpp"
#include "thsym/numeric.hpp"

using namespace thsym;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
  int g = 0;
  int degree = 0;
  int weight = 0;
  size_t prime_count = 2;
  std::string cache_dir;
  std::string dump;
  bool quiet = false;
  bool timing = false;
  size_t samples = 3;
  int truncation = 8;
  int threads = 1;
  bool unsafe = false;
  std::string name;
};

struct Run {
  json result = json::object();
  json claims = json::object();
  json certificates = json::object();
  size_t cache_hits = 0;
  std::vector<std::string> summary;

  void claim(const std::string& k, bool ok) { claims[k] = ok; }
  bool all_hold() const {
    for (auto& [k, v] : claims.items())
      if (!v.get<bool>()) return false;
    return true;
  }
  void say(const std::string& s) { summary.push_back(s); }
};

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string qstr(const GaussRational& c) {
  std::string re = c.re.get_str(), im = c.im.get_str();
  if (c.im == 0) return re;
  if (c.re == 0) return im + "i";
  return re + (c.im > 0 ? "+" : "") + im + "i";
}

json qvec(const std::vector<GaussRational>& v) {
  json a = json::array();
  for (auto& c : v) a.push_back(qstr(c));
  return a;
}

json big(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

// --weight and --degree are alternatives; degree = 2 weight
int resolve_degree(const Options& o, bool required = true) {
  if (o.degree && o.weight && o.degree != 2 * o.weight) throw usage_error("--degree and --weight disagree");
  int d = o.degree ? o.degree : 2 * o.weight;
  if (required && d <= 0) throw usage_error("need --degree or --weight");
  if (d && d % 4) throw usage_error("degree must be a multiple of 4 (weight even)");
  return d;
}

void need_g(const Options& o, int lo, int hi) {
  if (o.g < lo || o.g > hi)
    throw usage_error("--g must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void check_capacity(const Options& o, int g, int d) {
  if (!within_capacity(g, d) && !o.unsafe)
    throw capacity_error("(g=" + std::to_string(g) + ", degree=" + std::to_string(d) +
                         ") is outside the capacity table {(g<=3, degree<=24), (4, degree<=8)}; "
                         "pass --unsafe-override to try anyway");
}

// ------------------------------------------------------------ cache

std::string hex64(uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string cache_root(const Options& o) {
  if (!o.cache_dir.empty()) return o.cache_dir;
  if (const char* e = std::getenv("THSYM_CACHE_DIR")) return e;
  return "";
}

fs::path cache_path(const std::string& root, int g, int d, const std::string& kind, const std::string& key) {
  return fs::path(root) / std::to_string(g) / std::to_string(d) / (kind + "-" + hex64(fnv1a(key)) + ".bin");
}

// header line "thsym-cache 1 <hash of body>" then the body
std::optional<std::string> cache_read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::string tag, ver, hash;
  in >> tag >> ver >> hash;
  in.get();
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (tag != "thsym-cache" || ver != "1" || hash != hex64(fnv1a(body))) return std::nullopt;
  return body;
}

void cache_write(const fs::path& p, const std::string& body) {
  fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << "thsym-cache 1 " << hex64(fnv1a(body)) << "\n" << body;
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
  }
  fs::rename(tmp, p);
}

json spectrum_to_json(const SpectrumResult& s) {
  return {{"pairs", s.pairs},
          {"dim", s.dim},
          {"primes", s.primes},
          {"primes_agree", s.primes_agree},
          {"exact_fallback", s.exact_fallback},
          {"sum_ok", s.sum_ok},
          {"trace_ok", s.trace_ok},
          {"class_trace_ok", s.class_trace_ok},
          {"annihilator_ok", s.annihilator_ok},
          {"probes", s.probes},
          {"max_block", s.max_block},
          {"nblocks", s.nblocks}};
}

SpectrumResult spectrum_from_json(const json& j) {
  SpectrumResult s;
  s.pairs = j.at("pairs").get<std::vector<std::pair<int64_t, int64_t>>>();
  s.dim = j.at("dim");
  s.primes = j.at("primes").get<std::vector<uint32_t>>();
  s.primes_agree = j.at("primes_agree");
  s.exact_fallback = j.at("exact_fallback");
  s.sum_ok = j.at("sum_ok");
  s.trace_ok = j.at("trace_ok");
  s.class_trace_ok = j.at("class_trace_ok");
  s.annihilator_ok = j.at("annihilator_ok");
  s.probes = j.at("probes");
  s.max_block = j.at("max_block");
  s.nblocks = j.at("nblocks");
  return s;
}

SpectrumResult cached_spectrum(const Options& o, Run& run, int g, int d) {
  check_capacity(o, g, d);
  if (o.prime_count < 1) throw usage_error("--prime-count must be >= 1");
  auto primes = spectrum_primes(o.prime_count);
  auto cand = candidate_lambdas(irrep_table(g));
  std::string key = "spectrum|" + std::to_string(g) + "|" + std::to_string(d) + "|" + json(primes).dump() + "|" +
                    json(cand).dump();
  std::string root = cache_root(o);
  fs::path path;
  if (!root.empty()) {
    path = cache_path(root, g, d, "spectrum", key);
    if (auto body = cache_read(path)) {
      try {
        auto s = spectrum_from_json(json::parse(*body));
        ++run.cache_hits;
        return s;
      } catch (const std::exception&) {
        // fall through to recompute
      }
    }
  }
  auto B = orbit_sum_basis(g, d, o.unsafe);
  auto K = casimir_matrix(B);
  auto s = spectrum(K, cand, primes);
  if (!root.empty()) cache_write(path, spectrum_to_json(s).dump());
  return s;
}

// ------------------------------------------------------------ subcommands

void cmd_dims(const Options& o, Run& run) {
  if (o.g < 1) throw usage_error("--g must be >= 1");
  int d = resolve_degree(o, false);
  std::vector<int> degrees = d ? std::vector<int>{d} : std::vector<int>{4, 8, 12, 16};
  json row = json::object();
  for (int k : degrees) {
    auto v = invariant_dimension(o.g, k / 4);
    row[std::to_string(k)] = big(v);
    run.say("g=" + std::to_string(o.g) + " degree " + std::to_string(k) + ": " + v.get_str());
  }
  run.result["g"] = o.g;
  run.result["dimensions"] = row;
}

void cmd_group(const Options& o, Run& run) {
  need_g(o, 1, 3);
  auto els = enumerate_group(o.g);
  run.result["order"] = els.size();
  run.result["formula"] = group_order(o.g);
  run.claim("order_matches_formula", els.size() == group_order(o.g));
  run.say("|Sp(" + std::to_string(2 * o.g) + ",2)| = " + std::to_string(els.size()));
}

void cmd_spectrum(const Options& o, Run& run) {
  need_g(o, 1, 4);
  int d = resolve_degree(o);
  auto s = cached_spectrum(o, run, o.g, d);
  run.result["space"] = {{"g", o.g}, {"degree", d}, {"weight", d / 2}, {"dim", s.dim}};
  run.result["spectrum"] = s.pairs;
  run.certificates = {{"primes", s.primes},
                      {"primes_agree", s.primes_agree},
                      {"exact_fallback", s.exact_fallback},
                      {"multiplicity_sum", s.sum_ok},
                      {"trace", s.trace_ok},
                      {"class_trace", s.class_trace_ok},
                      {"annihilator", s.annihilator_ok},
                      {"probes", s.probes}};
  run.claim("certified", s.certified());
  std::ostringstream os;
  for (auto& [l, m] : s.pairs) os << " (" << l << "," << m << ")";
  run.say("spectrum on " + std::to_string(s.dim) + " dims:" + os.str());
}

void cmd_decompose(const Options& o, Run& run) {
  need_g(o, 1, 4);
  int d = resolve_degree(o);
  auto s = cached_spectrum(o, run, o.g, d);
  auto L = decompose(s, irrep_table(o.g), default_side_conditions(o.g, d), o.g, d);
  json j = json::parse(ledger_json(s, L).dump());
  run.certificates = j["certificates"];
  j.erase("certificates");
  run.result = j;
  run.result["space"]["degree"] = d;
  run.result["space"]["dim"] = s.dim;
  auto [p, m] = oplus_invariant_dims(L);
  run.result["oplus_invariants"] = p ? json(*p) : json(nullptr);
  run.result["epsilon_anti_invariants"] = m ? json(*m) : json(nullptr);
  run.claim("certified", s.certified());
  run.claim("accounted", L.accounted_dim() + [&] {
    int64_t u = 0;
    for (auto& x : L.unresolved) u += x.dim;
    return u;
  }() == int64_t(s.dim));
  std::ostringstream os;
  for (auto& [r, k] : L.entries)
    if (k) os << " " << (k > 1 ? std::to_string(k) : "") << r.name;
  run.say("decomposition:" + os.str() + (L.unresolved.empty() ? "" : " (+ unresolved)"));
}

void dump_form(const Options& o, const std::string& name, const PolyQ& p) {
  if (o.dump.empty()) return;
  fs::create_directories(o.dump);
  std::string file = name;
  for (auto& c : file)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  std::ofstream out(fs::path(o.dump) / (file + ".poly"));
  write_poly(out, p);
}

json form_entry(const NamedForm& f) {
  return {{"weight", f.weight}, {"terms", f.poly.size()}, {"nonzero", !f.poly.is_zero()}};
}

void cmd_forms(const Options& o, Run& run) {
  need_g(o, 1, 3);
  FormContext ctx;
  json forms = json::object();
  auto add = [&](const NamedForm& f) {
    forms[f.name] = form_entry(f);
    dump_form(o, f.name, f.poly);
    run.say(f.name + ": weight " + std::to_string(f.weight) + ", " + std::to_string(f.poly.size()) + " terms");
  };
  if (o.g == 1) {
    auto e = named("eta12", 1, to_q(eta12()));
    add(e);
    auto c = coords_q(ctx.basis(1, 12), e.poly);
    bool anti = true;
    for (auto v : nonzero_vectors(1)) anti &= ctx.rho(1, 12).apply(v, c) == negated(c);
    run.claim("eta12_sign_character", anti);
    add(named("Xi8", 1, xi8_g1()));
  } else if (o.g == 2) {
    auto x = xi8_g2_solve();
    add(named("Xi8", 2, x.xi));
    run.claim("xi8_unique", x.kernel_dim == 1);
    auto q = igusa_quartic();
    run.claim("igusa_relation", q.kernel_dim == 1 && q.evaluate(igusa_p()).is_zero());
  } else {
    auto f16 = named("F16", 3, to_q(f16_polynomial()));
    add(f16);
    auto O = lagrangian_orbit(ctx);
    run.result["lagrangian_orbit"] = O.size();
    auto P0 = p0_antiinvariant(O);
    add(P0);
    auto G = g_invariant(ctx, theta_pair_orbit(ctx, O));
    add(G);
    auto gc = coords_q(ctx.basis(3, 12), G.poly);
    bool inv = true;
    for (auto v : nonzero_vectors(3)) inv &= ctx.rho(3, 12).apply(v, gc) == gc;
    run.claim("G_invariant", inv);
    run.claim("G_nonzero", !G.poly.is_zero());
    auto pts = standard_points(3);
    run.claim("G_numerically_nonzero", verify_form_nonzero(G.poly, pts, 1e-8, {o.truncation}) == Nonzero::yes);
    add(g_bracket(O, {3, 0, 0}));
  }
  run.result["forms"] = forms;
}

json residual_json(const Residual& r) { return {{"abs", r.value}, {"relative", r.relative()}}; }

std::vector<SiegelPoint> sample_points(const Options& o, int g) {
  auto pts = standard_points(g);
  std::mt19937_64 rng(20240601);
  for (size_t i = 0; i < o.samples; ++i) pts.push_back(random_point(g, rng));
  return pts;
}

template <class F>
bool numeric_suite(const Options& o, Run& run, const std::string& key, int g, F f, double tol) {
  json arr = json::array();
  bool ok = true;
  for (auto& p : sample_points(o, g)) {
    auto r = f(p, Truncation{o.truncation});
    arr.push_back(residual_json(r));
    ok &= r.relative() < tol;
  }
  run.result[key] = arr;
  return ok;
}

void cmd_verify(const Options& o, Run& run) {
  const std::string& n = o.name;
  run.result["check"] = n;
  if (n == "jacobi") {
    run.claim("exact", (theta_power({1, 0, 0}, 4) - theta_power({1, 0, 1}, 4) - theta_power({1, 1, 0}, 4)).is_zero());
    run.claim("numeric", numeric_suite(o, run, "numeric", 1,
                                       [](auto& p, auto t) { return jacobi_residual(p, t); }, 1e-8));
  } else if (n == "r-relation") {
    auto r = r_squares();
    auto lhs = to_q((r.r1 + r.r2 - r.r3).pow(2) - (r.r1 * r.r2).scaled(GaussInt(4)));
    auto f16 = to_q(f16_polynomial());
    run.result["polynomial_identity"] = lhs.is_zero();
    run.result["difference_over_f16"] = "1/336";
    run.claim("exact_modulo_f16", lhs == f16.scaled(GaussRational(mpq_class(1, 336))));
    run.claim("numeric", numeric_suite(o, run, "numeric", 3,
                                       [](auto& p, auto t) { return r_relation_residual(p, t); }, 1e-6));
  } else if (n == "f16") {
    FormContext ctx;
    auto f = f16_polynomial();
    auto c = coords_q(ctx.basis(3, 16), f);
    bool inv = true;
    for (auto v : nonzero_vectors(3)) inv &= ctx.rho(3, 16).apply(v, c) == c;
    run.claim("nonzero_polynomial", !f.is_zero());
    run.claim("heisenberg_invariant", is_invariant(f));
    run.claim("sp6_invariant", inv);
    run.claim("vanishes_numerically",
              numeric_suite(o, run, "numeric", 3,
                            [&](auto& p, auto t) { return poly_residual(f, big_theta_vector(p, t)); }, 1e-6));
  } else if (n == "igusa") {
    auto q = igusa_quartic();
    run.result["kernel_dim"] = q.kernel_dim;
    run.result["ring_dims"] = q.ring_dims;
    run.claim("kernel_one_dimensional", q.kernel_dim == 1);
    run.claim("quartic_vanishes", q.evaluate(igusa_p()).is_zero());
  } else if (n == "e7") {
    auto r = e7_checks();
    run.result = {{"check", n},
                  {"edges", r.edges_ok},
                  {"l0_product_identity", r.l0_product_identity},
                  {"top_row_quadric", r.top_row_quadric},
                  {"top_row_group_order", r.top_row_group_order}};
    run.claim("e7", r.ok());
  } else if (n == "gamma2-heisenberg") {
    std::mt19937_64 rng(777);
    json per = json::object();
    bool ok = true;
    for (int g = 1; g <= 3; ++g) {
      auto gens = gamma2_generators(g);
      double worst = 0;
      for (auto& m : gens) worst = std::max(worst, gamma2_deviation(m, standard_points(g)[1], {o.truncation}));
      for (size_t t = 0; t < std::max<size_t>(o.samples, 1); ++t) {
        IntMatrix m = IntMatrix::identity(2 * g);
        for (int k = 0; k < 3; ++k) m = m * gens[rng() % gens.size()];
        worst = std::max(worst, gamma2_deviation(m, random_point(g, rng), {o.truncation}));
      }
      per[std::to_string(g)] = worst;
      ok &= worst < 1e-8;
    }
    run.result["max_relative_deviation"] = per;
    run.claim("proportional", ok);
  } else if (n == "sextet-cusp") {
    FormContext ctx;
    auto all = asyzygous_sextets();
    size_t noncusp = 0;
    for (auto& s : all)
      if (!degeneration_last(sextet_form(s)).is_zero()) ++noncusp;
    size_t perm = sextet_permutation_failures(ctx, all);
    run.result["sextets"] = all.size();
    run.result["noncusp"] = noncusp;
    run.result["permutation_failures"] = perm;
    run.claim("all_cusp", all.size() == 336 && noncusp == 0 && perm == 0);
  } else if (n == "miyawaki") {
    FormContext ctx;
    auto r = miyawaki_f12(ctx);
    run.result["sextets"] = r.sextets;
    run.result["specialized_degree"] = r.specialized_degree;
    run.claim("invariant", r.invariant());
    run.claim("cusp", r.cusp());
    run.claim("not_multiple_of_f16", r.specialization_nonmultiple);
    auto v = f12_value(standard_points(3)[1], {o.truncation});
    run.result["numeric"] = residual_json(v);
    run.claim("numerically_nonzero", v.relative() > 1e-8);
  } else {
    throw usage_error("unknown check '" + n +
                      "'; expected jacobi, r-relation, f16, igusa, e7, gamma2-heisenberg, sextet-cusp, miyawaki");
  }
  for (auto& [k, v] : run.claims.items()) run.say(n + " " + k + ": " + (v.get<bool>() ? "pass" : "FAIL"));
}

void cmd_xi(const Options& o, Run& run) {
  const std::string& n = o.name;
  run.result["system"] = n;
  if (n == "xi8-g2") {
    auto r = xi8_g2_solve();
    run.result["kernel_dim"] = r.kernel_dim;
    run.result["coefficients"] = qvec(r.coeffs);
    run.result["terms"] = r.xi.size();
    dump_form(o, "Xi8_g2", r.xi);
    run.claim("unique", r.kernel_dim == 1 && r.coeffs.size() == 3);
    run.claim("psi_excluded", r.psi_excluded);
    run.claim("divisible_by_theta4", r.divisible_by_theta4);
    run.say("xi8-g2: " + std::string(r.kernel_dim == 1 ? "unique solution" : "not unique"));
  } else if (n == "xi6-g3") {
    FormContext ctx;
    auto r = xi6_g3_nonexistence(ctx);
    run.result["rank"] = r.rank;
    run.result["solution"] = r.rank == 3 ? "no solution" : "nontrivial solutions";
    run.claim("no_solution", r.rank == 3);
    run.claim("restriction_identities", r.identity_theta12 && r.identity_sum12 && r.identity_theta4_psi4);
    run.say("xi6-g3: rank " + std::to_string(r.rank));
  } else if (n == "xi8-g3") {
    FormContext ctx;
    auto O = lagrangian_orbit(ctx);
    auto r = xi8_g3_solve(O, xi8_g2_solve().xi);
    run.result["kernel_dim"] = r.kernel_dim;
    run.result["coefficients"] = qvec(r.coeffs);
    run.claim("ray_4_4_-3_-12", r.kernel_dim == 1 && r.on_expected_ray({4, 4, -3, -12}));
    run.claim("psi_excluded", r.psi_excluded);
    run.claim("ansatz_divisible", r.ansatz_divisible);
    run.say("xi8-g3: kernel " + std::to_string(r.kernel_dim));
  } else {
    throw usage_error("unknown system '" + n + "'; expected xi8-g2, xi6-g3, xi8-g3");
  }
}

void cmd_sextets(const Options&, Run& run) {
  FormContext ctx;
  auto r = sextet_report(ctx);
  run.result = {{"count", r.count},
                {"rank", r.rank},
                {"sym3_rank", r.sym3_rank},
                {"rank_with_sym3", r.rank_with_sym3},
                {"signed_permutation_failures", r.signed_permutation_failures}};
  run.claim("rank_105", r.rank == 105);
  run.claim("sym3_680", r.sym3_rank == 680);
  run.claim("intersection_zero", r.intersection_zero());
  run.claim("signed_permutation", r.signed_permutation_failures == 0);
  run.say("sextets: " + std::to_string(r.count) + " forms, rank " + std::to_string(r.rank));
}

void cmd_miyawaki(const Options& o, Run& run) {
  Options v = o;
  v.name = "miyawaki";
  cmd_verify(v, run);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thsym: invariants of the Heisenberg group and theta constants"};
  app.require_subcommand(1, 1);
  Options o;
  auto common = [&](CLI::App* c, bool space) {
    if (space) {
      c->add_option("--g", o.g, "genus");
      c->add_option("--degree", o.degree, "polynomial degree (= 2 weight)");
      c->add_option("--weight", o.weight, "weight");
    }
    c->add_option("--prime-count", o.prime_count, "primes for modular ranks")->capture_default_str();
    c->add_option("--cache-dir", o.cache_dir, "cache directory (default $THSYM_CACHE_DIR)");
    c->add_option("--dump", o.dump, "write polynomials to this directory");
    c->add_flag("--json", o.quiet, "JSON only, no summary on stderr");
    c->add_flag("--timing", o.timing, "include wall time in the JSON");
    c->add_option("--samples", o.samples, "random sample points for numeric checks")->capture_default_str();
    c->add_option("--truncation", o.truncation, "lattice radius M")->capture_default_str();
    c->add_option("--threads", o.threads, "worker cap")->capture_default_str();
    c->add_flag("--unsafe-override", o.unsafe, "ignore the capacity table");
  };
  std::map<std::string, std::function<void(const Options&, Run&)>> handlers{
      {"dims", cmd_dims},     {"group", cmd_group},     {"decompose", cmd_decompose},
      {"spectrum", cmd_spectrum}, {"forms", cmd_forms}, {"verify", cmd_verify},
      {"xi", cmd_xi},         {"sextets", cmd_sextets}, {"miyawaki", cmd_miyawaki}};
  std::map<std::string, CLI::App*> subs;
  for (auto& [name, h] : handlers) {
    auto* c = app.add_subcommand(name);
    common(c, name != "verify" && name != "xi" && name != "sextets" && name != "miyawaki");
    if (name == "verify") c->add_option("name", o.name, "check name")->required();
    if (name == "xi") c->add_option("which", o.name, "xi8-g2, xi6-g3 or xi8-g3")->required();
    subs[name] = c;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  std::string sub;
  for (auto& [name, c] : subs)
    if (c->parsed()) sub = name;

  Run run;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (o.threads < 1) throw usage_error("--threads must be >= 1");
    if (o.truncation < 1) throw usage_error("--truncation must be >= 1");
    handlers.at(sub)(o, run);
  } catch (const std::exception& e) {
    json err = {{"request", {{"subcommand", sub}}}, {"error", e.what()}};
    std::cout << err.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json request = {{"subcommand", sub}, {"prime_count", o.prime_count}, {"truncation", o.truncation},
                  {"samples", o.samples}, {"threads", o.threads}, {"unsafe_override", o.unsafe}};
  if (o.g) request["g"] = o.g;
  if (o.degree || o.weight) request["degree"] = resolve_degree(o, false);
  if (!o.name.empty()) request["name"] = o.name;
  json report = {{"request", request},
                 {"result", run.result},
                 {"claims", run.claims},
                 {"certificates", run.certificates},
                 {"cache_hits", run.cache_hits}};
  if (o.timing) report["wall_time_s"] = secs;
  std::cout << report.dump(2) << "\n";
  bool ok = run.all_hold();
  if (!o.quiet) {
    for (auto& s : run.summary) std::cerr << s << "\n";
    std::cerr << sub << ": " << (ok ? "all claims hold" : "a claim FAILED") << " (" << std::fixed
              << std::setprecision(2) << secs << " s, " << run.cache_hits << " cache hits)\n";
  }
  return ok ? 0 : 2;
}
