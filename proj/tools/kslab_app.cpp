#include "kslab_app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ksparse/error.hpp"
#include "ksparse/generators.hpp"
#include "ksparse/graph_io.hpp"
#include "ksparse/klaus_check.hpp"
#include "ksparse/perturb.hpp"
#include "ksparse/presentation.hpp"
#include "ksparse/spectral.hpp"
#include "ksparse/spectral_set.hpp"
#include "ksparse/weyl_lab.hpp"

namespace kslab {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

using nlohmann::json;
using namespace ksparse;
namespace fs = std::filesystem;

std::string hex(std::uint64_t h) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Context {
  std::string command;
  std::uint64_t seed = 0;
  std::uint64_t input_hash = fnv1a("");

  void hash_input(const std::string& contents) { input_hash = fnv1a(contents, input_hash); }

  json provenance() const {
    return {{"tool", "kslab"},
            {"version", kVersion},
            {"command", command},
            {"seed", seed},
            {"input_hash", hex(input_hash)}};
  }
  std::string header() const {
    return "# kslab " + std::string(kVersion) + " command=\"" + command + "\" seed=" + std::to_string(seed) +
           " input_hash=" + hex(input_hash) + "\n";
  }
};

// Writes via a temporary file so readers never see partial output.
void write_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorCode::BadParameter, "cannot write '" + path.string() + "'");
    out << contents;
  }
  fs::rename(tmp, path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

json set_json(const SpectralSet& s) {
  json iv = json::array();
  for (auto [a, b] : s.intervals) iv.push_back({a, b});
  return {{"intervals", iv}, {"points", s.points}, {"accumulation", s.accumulation}};
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

// Family parameters from the shared flags.
std::vector<double> family_params(const std::string& family, std::vector<double> params,
                                  std::optional<double> m0, std::optional<int> apexes) {
  if (m0) {
    if (family != "line") throw Error(ErrorCode::BadParameter, "--m0 applies to the line family only");
    params = {*m0};
  }
  if (apexes) {
    if (family != "z2-apex") throw Error(ErrorCode::BadParameter, "--apexes applies to z2-apex only");
    params = {static_cast<double>(*apexes)};
  }
  return params;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string family;
  std::vector<double> params;
  std::optional<double> m0;
  std::optional<int> apexes;
  std::size_t radius = 0;
  double bump = 0.0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, Context& ctx, std::ostream& out) {
  const auto params = family_params(a.family, a.params, a.m0, a.apexes);
  const auto gen = make_generator(a.family, params);
  auto ball = materialize(gen, a.radius);
  WeightedGraph g = ball.graph;
  if (a.bump != 0.0) {
    if (!(a.bump > -1.0)) throw Error(ErrorCode::BadParameter, "--bump must exceed -1");
    g = scale_measure(g, ball.root, [&](std::size_t d) { return 1.0 + a.bump / (1.0 + static_cast<double>(d)); });
  }
  const auto census = growth_profile(gen, a.radius).sphere_sizes;
  std::size_t edges = 0;
  for (std::size_t i = 0; i < g.size(); ++i) edges += g.neighbors(i).size();
  edges /= 2;

  std::string name = a.family + "-r" + std::to_string(a.radius);
  for (double p : params) name += "-" + format_double(p);
  if (a.bump != 0.0) name += "-bump" + format_double(a.bump);

  std::ostringstream text;
  text << ctx.header() << "# census";
  for (auto c : census) text << ' ' << c;
  text << '\n';
  write_graph(text, g, name);

  json meta = {{"provenance", ctx.provenance()},
               {"name", name},
               {"family", a.family},
               {"params", params},
               {"radius", a.radius},
               {"bump", a.bump},
               {"root", raw(ball.root)},
               {"vertices", g.size()},
               {"edges", edges},
               {"sphere_census", census}};
  if (a.out.empty()) {
    out << text.str();
    return 0;
  }
  const fs::path dir(a.out);
  write_atomic(dir / (name + ".graph"), text.str());
  write_atomic(dir / (name + ".json"), dump(meta));
  out << dump(meta);
  return 0;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const std::string& file, const std::string& boundary_name, double tol,
                 const std::string& out_dir, Context& ctx, std::ostream& out) {
  const auto contents = slurp(file);
  ctx.hash_input(contents);
  std::istringstream in(contents);
  const auto ng = read_graph(in);
  const auto boundary = parse_boundary(boundary_name);
  const auto sp = spectrum(ng.graph, boundary);
  const auto& ev = sp.eigenvalues;

  json top = nullptr;
  if (ev.size() >= 2) {
    const double gap = ev.back() - ev[ev.size() - 2];
    top = {{"value", ev.back()}, {"gap", gap}, {"isolated", gap > tol}};
  }
  json summary = {{"provenance", ctx.provenance()},
                  {"graph", ng.name},
                  {"boundary", to_string(boundary)},
                  {"count", ev.size()},
                  {"min", ev.front()},
                  {"max", ev.back()},
                  {"gap_tol", tol},
                  {"top_isolated", top}};
  if (!out_dir.empty()) {
    std::ostringstream csv;
    csv << ctx.header() << "index,eigenvalue\n";
    for (std::size_t i = 0; i < ev.size(); ++i) csv << i << ',' << format_double(ev[i]) << '\n';
    const auto base = fs::path(out_dir) / (stem(file) + "-" + to_string(boundary));
    write_atomic(base.string() + ".csv", csv.str());
    write_atomic(base.string() + ".json", dump(summary));
  }
  out << dump(summary);
  return 0;
}

// ---------------------------------------------------------------- converge

// Sweep file:
//   family <tag> [params...]   |  presentation <plan file>  |  sequence <K> <radius>
//   radii <r1> <r2> ...         (strictly increasing)
//   reference interval <a> <b>  (default: the family's or localizations' closed form)
//   margin <m>                  (default 10)
//   cluster_tol <t>             (default 0.05)
struct Sweep {
  std::string mode;  // family, presentation, sequence
  std::string family;
  std::vector<double> params;
  std::string plan_path;
  std::vector<std::size_t> radii;
  std::optional<std::pair<double, double>> reference_interval;
  std::size_t margin = 10;
  double cluster_tol = 0.05;
  std::size_t seq_count = 0;
  std::size_t seq_radius = 0;
};

Sweep read_sweep(const std::string& contents, const fs::path& dir) {
  Sweep s;
  std::istringstream in(contents);
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::ParseError, "sweep line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "family") {
      s.mode = "family";
      if (!(ls >> s.family)) fail("family needs a tag");
      for (double p; ls >> p;) s.params.push_back(p);
    } else if (key == "presentation") {
      s.mode = "presentation";
      std::string p;
      if (!(ls >> p)) fail("presentation needs a plan path");
      s.plan_path = fs::path(p).is_absolute() ? p : (dir / p).string();
    } else if (key == "sequence") {
      s.mode = "sequence";
      if (!(ls >> s.seq_count >> s.seq_radius) || s.seq_count == 0) fail("sequence needs <K> <radius>");
    } else if (key == "radii") {
      for (std::size_t r; ls >> r;) s.radii.push_back(r);
    } else if (key == "reference") {
      std::string kind;
      double a = 0, b = 0;
      if (!(ls >> kind >> a >> b) || kind != "interval" || !(a <= b)) fail("expected 'reference interval <a> <b>'");
      s.reference_interval = {a, b};
    } else if (key == "margin") {
      if (!(ls >> s.margin)) fail("margin needs an integer");
    } else if (key == "cluster_tol") {
      if (!(ls >> s.cluster_tol) || !(s.cluster_tol > 0)) fail("cluster_tol must be positive");
    } else {
      fail("unknown key '" + key + "'");
    }
    if (std::string extra; ls.clear(), ls >> extra) fail("trailing token '" + extra + "'");
  }
  if (s.mode.empty()) throw Error(ErrorCode::ParseError, "sweep needs family, presentation or sequence");
  if (s.mode != "sequence") {
    if (s.radii.empty()) throw Error(ErrorCode::ParseError, "sweep needs radii");
    for (std::size_t i = 1; i < s.radii.size(); ++i)
      if (s.radii[i] <= s.radii[i - 1]) throw Error(ErrorCode::BadParameter, "radii must be strictly increasing");
  }
  return s;
}

double filtered_distance(const WeightedGraph& g, Boundary b, std::size_t margin, const SpectralSet& ref) {
  const auto es = eigensystem(g, b);
  const auto f = filter_boundary_states(g, es, margin);
  if (f.kept.empty()) throw Error(ErrorCode::EmptySet, "boundary filter removed every eigenvalue");
  return hausdorff(f.kept, ref);
}

int cmd_converge(const std::string& file, const std::string& out_dir, Context& ctx, std::ostream& out) {
  const auto contents = slurp(file);
  ctx.hash_input(contents);
  const auto sweep = read_sweep(contents, fs::path(file).parent_path());
  json report = {{"provenance", ctx.provenance()}, {"mode", sweep.mode}};
  std::ostringstream csv;
  csv << ctx.header();

  if (sweep.mode == "sequence") {
    // weighted lines with s(k) = 1 - sqrt(2)/2 + 1/(2k)
    const std::size_t K = sweep.seq_count;
    std::vector<std::future<SpectrumApprox>> jobs;
    std::vector<double> s(K), formula(K);
    for (std::size_t k = 1; k <= K; ++k) {
      s[k - 1] = 1.0 - std::sqrt(2.0) / 2.0 + 1.0 / (2.0 * static_cast<double>(k));
      formula[k - 1] = 4.0 / (s[k - 1] * (2.0 - s[k - 1]));
      jobs.push_back(std::async(std::launch::async, [&, k] {
        return spectrum(materialize(gen_line(s[k - 1]), sweep.seq_radius).graph, Boundary::neumann,
                        sweep.seq_radius, "line");
      }));
    }
    std::vector<SpectrumApprox> spectra;
    csv << "k,s,formula,truncation\n";
    bool monotone = true;
    for (std::size_t k = 1; k <= K; ++k) {
      spectra.push_back(jobs[k - 1].get());
      const double top = spectra.back().eigenvalues.back();
      csv << k << ',' << format_double(s[k - 1]) << ',' << format_double(formula[k - 1]) << ','
          << format_double(top) << '\n';
      if (k > 1 && !(formula[k - 1] > formula[k - 2])) monotone = false;
    }
    const auto closure = union_closure(spectra, sweep.cluster_tol);
    report["count"] = K;
    report["radius"] = sweep.seq_radius;
    report["monotone"] = monotone;
    report["closure"] = set_json(closure);
  } else {
    SpectralSet ref;
    std::optional<PresentationPlan> plan;
    if (sweep.mode == "presentation") {
      const auto plan_text = slurp(sweep.plan_path);
      ctx.hash_input(plan_text);
      std::istringstream ps(plan_text);
      plan = read_plan(ps);
      std::vector<SpectralSet> locs;
      for (const auto& [k, fp] : plan->localizations) locs.push_back(reference_spectrum_for(fp.first, fp.second));
      ref = union_closure(locs, sweep.cluster_tol);
    } else {
      make_generator(sweep.family, sweep.params);
      if (!sweep.reference_interval) ref = reference_spectrum_for(sweep.family, sweep.params);
    }
    if (sweep.reference_interval) {
      ref = SpectralSet{};
      ref.intervals = {*sweep.reference_interval};
    }
    report["provenance"] = ctx.provenance();

    auto window = [&](std::size_t r) {
      if (plan) {
        auto pl = *plan;
        pl.window_radius = r;
        return WeightedGraph(*assemble(pl).window);
      }
      return materialize(make_generator(sweep.family, sweep.params), r).graph;
    };
    std::vector<std::future<std::pair<double, double>>> jobs;
    for (auto r : sweep.radii)
      jobs.push_back(std::async(std::launch::async, [&, r] {
        const auto g = window(r);
        return std::pair{filtered_distance(g, Boundary::neumann, sweep.margin, ref),
                         filtered_distance(g, Boundary::dirichlet, sweep.margin, ref)};
      }));
    csv << "radius,neumann,dirichlet\n";
    json rows = json::array();
    for (std::size_t i = 0; i < sweep.radii.size(); ++i) {
      const auto [n, d] = jobs[i].get();
      csv << sweep.radii[i] << ',' << format_double(n) << ',' << format_double(d) << '\n';
      rows.push_back({{"radius", sweep.radii[i]}, {"neumann", n}, {"dirichlet", d}});
    }
    report["reference"] = set_json(ref);
    report["margin"] = sweep.margin;
    report["rows"] = rows;
  }
  if (!out_dir.empty()) {
    const auto base = fs::path(out_dir) / (stem(file) + "-converge");
    write_atomic(base.string() + ".csv", csv.str());
    write_atomic(base.string() + ".json", dump(report));
  }
  out << dump(report);
  return 0;
}

// ---------------------------------------------------------------- weyl

struct WeylArgs {
  std::string family;
  std::vector<double> params;
  std::optional<double> m0;
  std::optional<int> apexes;
  double lambda = 0.0;
  std::size_t radius = 0;
  std::string into;
  std::optional<std::size_t> placement;
  double tol = 1e-12;
  std::string out;
};

int cmd_weyl(const WeylArgs& a, Context& ctx, std::ostream& out) {
  const auto params = family_params(a.family, a.params, a.m0, a.apexes);
  const auto gen = make_generator(a.family, params);
  const auto cert = eigvec_certificate(gen, a.lambda, a.radius);
  json report = {{"certificate", cert.to_json()}};
  int code = 0;
  if (!a.into.empty()) {
    const auto plan_text = slurp(a.into);
    ctx.hash_input(plan_text);
    std::istringstream ps(plan_text);
    const auto p = assemble(read_plan(ps));
    std::optional<WeylCertificate> moved;
    std::optional<std::size_t> used;
    json tried = json::array();
    // medium certificates go into an annulus, localization ones to a pattern center
    if (gen.family == p.medium.family && gen.params == p.medium.params) {
      try {
        moved = medium_transplant(cert, p, a.placement);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoAnnulusFound) throw;
      }
    }
    for (std::size_t i = 0; i < p.placements.size() && !moved; ++i) {
      if (a.placement && *a.placement != i) continue;
      tried.push_back(i);
      if (auto emb = placement_embedding(cert, p, i)) {
        try {
          moved = transplant(cert, *emb, p.window);
          used = i;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::MarginViolation) throw;
        }
      }
    }
    if (moved) {
      const double before = cert.residual;
      const double after = moved->residual;
      const double rel = std::abs(after - before) / std::max({std::abs(before), std::abs(after), 1e-300});
      const bool ok = rel <= a.tol;
      report["transplant"] = {{"placement", used ? json(*used) : json(nullptr)},
                              {"residual_before", before},
                              {"residual_after", after},
                              {"relative_difference", rel},
                              {"tol", a.tol},
                              {"status", ok ? "pass" : "fail"},
                              {"certificate", moved->to_json()}};
      if (!ok) code = 1;
    } else {
      report["transplant"] = {{"status", "fail"}, {"reason", "NoEmbedding"}, {"tried", tried}};
      code = 1;
    }
  }
  report["provenance"] = ctx.provenance();
  const auto text = dump(report);
  if (!a.out.empty()) write_atomic(fs::path(a.out) / (a.family + "-weyl.json"), text);
  // the stdout summary drops the vectors
  json brief = report;
  brief["certificate"].erase("vector");
  if (brief.contains("transplant") && brief["transplant"].contains("certificate"))
    brief["transplant"]["certificate"].erase("vector");
  out << dump(brief);
  return code;
}

// ---------------------------------------------------------------- check

int cmd_check(const std::string& file, std::size_t radius, const std::string& out_dir, Context& ctx,
              std::ostream& out) {
  const auto contents = slurp(file);
  ctx.hash_input(contents);
  std::istringstream in(contents);
  const auto p = assemble(read_plan(in));
  const auto reports = check_all(p, radius);
  json conds = json::array();
  bool failed = false;
  for (const auto& r : reports) {
    conds.push_back(r.to_json());
    failed = failed || r.status == Status::fail;
  }
  const auto W = compute_W(p);
  json bd_witness;
  const bool block = sharp_block_diagonal(p, &bd_witness);
  json report = {{"provenance", ctx.provenance()},
                 {"plan", stem(file)},
                 {"radius", radius},
                 {"window_vertices", p.window->size()},
                 {"conditions", conds},
                 {"W", {{"sup", W.sup},
                        {"support_in_components", W.support_in_components},
                        {"bounded_by_medium_degree", W.bounded_by_medium_degree}}},
                 {"block_diagonal", {{"holds", block}, {"witness", bd_witness}}},
                 {"status", failed ? "fail" : "pass"}};
  if (!out_dir.empty()) write_atomic(fs::path(out_dir) / (stem(file) + "-check.json"), dump(report));
  out << dump(report);
  return failed ? 1 : 0;
}

// ---------------------------------------------------------------- perturb

struct PerturbArgs {
  std::string g_file, gt_file;
  std::size_t shells = 10;
  std::size_t margin = 10;
  std::size_t trials = 500;
  std::uint64_t base = 0;
  std::string boundary = "dirichlet";
  double tol = 1e-10;
  std::string out;
};

int cmd_perturb(const PerturbArgs& a, Context& ctx, std::ostream& out) {
  auto load = [&](const std::string& path) {
    const auto text = slurp(path);
    ctx.hash_input(text);
    std::istringstream in(text);
    return read_graph(in).graph;
  };
  auto g = load(a.g_file);
  auto gt = load(a.gt_file);
  const auto boundary = parse_boundary(a.boundary);
  const auto pair = make_pair(std::move(g), std::move(gt), vid(a.base));

  const auto hyp = check_hypotheses(pair, a.shells);
  const auto F = F_domination(pair, a.trials, ctx.seed);
  const auto t = symmetric_eigenvalues(transported_matrix(pair, boundary));
  const auto d = symmetric_eigenvalues(laplacian_matrix(pair.g_tilde, boundary));
  double diff = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) diff = std::max(diff, std::abs(t[i] - d[i]));
  json spectra;
  try {
    const auto cmp = compare_spectra(pair, boundary, a.margin);
    spectra = {{"raw", cmp.raw}, {"filtered", cmp.filtered}, {"kept_g", cmp.kept_g},
               {"kept_g_tilde", cmp.kept_g_tilde}, {"margin", a.margin}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptySet) throw;
    spectra = {{"error", "EmptySet"}, {"margin", a.margin}};
  }
  const bool ok = hyp.pass && F.ok && diff <= a.tol;
  json report = {{"provenance", ctx.provenance()},
                 {"base", a.base},
                 {"boundary", to_string(boundary)},
                 {"hypotheses", {{"shells", a.shells},
                                 {"measure_sups", to_json(hyp.measure_sups)},
                                 {"edge_sups", to_json(hyp.edge_sups)},
                                 {"measure_decreasing", hyp.measure_decreasing},
                                 {"edge_decreasing", hyp.edge_decreasing},
                                 {"c_bound", hyp.c_bound},
                                 {"pass", hyp.pass}}},
                 {"F_domination", {{"trials", a.trials},
                                   {"max_excess", F.max_excess},
                                   {"scale", F.scale},
                                   {"ok", F.ok},
                                   {"shell_ratio", to_json(F.shell_ratio)},
                                   {"decreasing", F.decreasing}}},
                 {"transported", {{"max_eigenvalue_difference", diff}, {"tol", a.tol}}},
                 {"spectra", spectra},
                 {"status", ok ? "pass" : "fail"}};
  if (!a.out.empty()) write_atomic(fs::path(a.out) / "perturb.json", dump(report));
  out << dump(report);
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- growth

struct GrowthArgs {
  std::string graph_file;
  std::string family;
  std::vector<double> params;
  std::optional<double> m0;
  std::optional<int> apexes;
  std::uint64_t base = 0;
  std::size_t radius = 10;
  double gamma = 2.0;
  double C = 4.0;
  std::string out;
};

int cmd_growth(const GrowthArgs& a, Context& ctx, std::ostream& out) {
  if (a.graph_file.empty() == a.family.empty())
    throw Error(ErrorCode::BadParameter, "growth needs exactly one of <graph> or --family");
  ConditionReport rep;
  GrowthProfile prof;
  std::string label;
  if (!a.family.empty()) {
    const auto gen = make_generator(a.family, family_params(a.family, a.params, a.m0, a.apexes));
    rep = check_growth(gen, a.gamma, a.C, a.radius);
    prof = growth_profile(gen, a.radius);
    label = a.family;
  } else {
    const auto text = slurp(a.graph_file);
    ctx.hash_input(text);
    std::istringstream in(text);
    const auto ng = read_graph(in);
    rep = check_growth(ng.graph, vid(a.base), a.gamma, a.C, a.radius);
    prof = growth_profile(ng.graph, vid(a.base), a.radius);
    label = stem(a.graph_file);
  }
  std::ostringstream csv;
  csv << ctx.header() << "radius,sphere_size,bound\n";
  json rows = json::array();
  for (std::size_t r = 0; r < prof.sphere_sizes.size(); ++r) {
    const double bound = a.C * std::pow(a.gamma, static_cast<double>(r));
    csv << r << ',' << prof.sphere_sizes[r] << ',' << format_double(bound) << '\n';
  }
  json report = {{"provenance", ctx.provenance()},
                 {"source", label},
                 {"gamma", a.gamma},
                 {"C", a.C},
                 {"r_max", a.radius},
                 {"sphere_sizes", prof.sphere_sizes},
                 {"report", rep.to_json()}};
  if (!a.out.empty()) {
    const auto base = fs::path(a.out) / (label + "-growth");
    write_atomic(base.string() + ".csv", csv.str());
    write_atomic(base.string() + ".json", dump(report));
  }
  out << dump(report);
  return rep.status == Status::fail ? 1 : 0;
}

bool is_usage_error(ErrorCode c) {
  return c == ErrorCode::ParseError || c == ErrorCode::UnknownFamily || c == ErrorCode::BadParameter ||
         c == ErrorCode::NonpositiveParameter;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kslab: spectra of Klaus-sparse graphs at desk scale", "kslab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Context ctx;
  ctx.command = "kslab";
  for (const auto& a : args) ctx.command += " " + a;

  auto boundary_check = CLI::IsMember({"neumann", "dirichlet"});

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "materialize a ball of a generator family");
  g->add_option("family", gen.family, "line, three-star, z2, z2-apex, antitree, antitree-z")->required();
  g->add_option("--param", gen.params, "family parameters");
  g->add_option("--m0", gen.m0, "line: measure at the origin");
  g->add_option("--apexes", gen.apexes, "z2-apex: number of apexes (1 or 2)");
  g->add_option("--radius", gen.radius, "ball radius")->required();
  g->add_option("--bump", gen.bump, "multiply m(x) by 1 + bump/(1 + |x|)");
  g->add_option("--out", gen.out, "output directory (default: graph text on stdout)");
  g->add_option("--seed", ctx.seed, "recorded seed");

  std::string spec_file, spec_boundary = "neumann", spec_out;
  double spec_tol = 0.05;
  auto* s = app.add_subcommand("spectrum", "eigenvalues of a graph file");
  s->add_option("graph", spec_file)->required();
  s->add_option("--boundary", spec_boundary)->check(boundary_check);
  s->add_option("--tol", spec_tol, "gap above which the top eigenvalue counts as isolated");
  s->add_option("--out", spec_out, "output directory for CSV + JSON");
  s->add_option("--seed", ctx.seed, "recorded seed");

  std::string conv_file, conv_out;
  auto* c = app.add_subcommand("converge", "filtered truncation spectra against a reference over a sweep");
  c->add_option("sweep", conv_file)->required();
  c->add_option("--out", conv_out, "output directory for CSV + JSON");
  c->add_option("--seed", ctx.seed, "recorded seed");

  WeylArgs weyl;
  auto* w = app.add_subcommand("weyl", "approximate eigenfunction certificate, optionally transplanted");
  w->add_option("--family", weyl.family)->required();
  w->add_option("--param", weyl.params);
  w->add_option("--m0", weyl.m0);
  w->add_option("--apexes", weyl.apexes);
  w->add_option("--lambda", weyl.lambda)->required();
  w->add_option("--radius", weyl.radius, "certificate radius")->required();
  w->add_option("--into", weyl.into, "plan file of the target presentation");
  w->add_option("--placement", weyl.placement, "restrict to one placement");
  w->add_option("--tol", weyl.tol, "relative tolerance on the residual pair");
  w->add_option("--out", weyl.out);
  w->add_option("--seed", ctx.seed, "recorded seed");

  std::string check_file, check_out;
  std::size_t check_radius = 1;
  auto* k = app.add_subcommand("check", "Klaus-sparse condition checks on a plan file");
  k->add_option("plan", check_file)->required();
  k->add_option("--radius", check_radius, "ball radius for conditions b2 and e");
  k->add_option("--out", check_out);
  k->add_option("--seed", ctx.seed, "recorded seed");

  PerturbArgs pert;
  auto* p = app.add_subcommand("perturb", "stability checks for a pair of graphs on the same vertices");
  p->add_option("g", pert.g_file)->required();
  p->add_option("g_tilde", pert.gt_file)->required();
  p->add_option("--shells", pert.shells);
  p->add_option("--margin", pert.margin, "boundary filter margin");
  p->add_option("--trials", pert.trials, "random functions for the F bound")->check(CLI::PositiveNumber);
  p->add_option("--base", pert.base, "base vertex id");
  p->add_option("--boundary", pert.boundary)->check(boundary_check);
  p->add_option("--tol", pert.tol, "tolerance for transported vs direct eigenvalues");
  p->add_option("--seed", ctx.seed);
  p->add_option("--out", pert.out);

  GrowthArgs gr;
  auto* r = app.add_subcommand("growth", "sphere growth against C * gamma^r");
  r->add_option("graph", gr.graph_file);
  r->add_option("--family", gr.family);
  r->add_option("--param", gr.params);
  r->add_option("--m0", gr.m0);
  r->add_option("--apexes", gr.apexes);
  r->add_option("--base", gr.base, "base vertex id (graph files)");
  r->add_option("--radius", gr.radius, "largest radius");
  r->add_option("--gamma", gr.gamma);
  r->add_option("--C", gr.C);
  r->add_option("--out", gr.out);
  r->add_option("--seed", ctx.seed, "recorded seed");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) return cmd_generate(gen, ctx, out);
    if (*s) return cmd_spectrum(spec_file, spec_boundary, spec_tol, spec_out, ctx, out);
    if (*c) return cmd_converge(conv_file, conv_out, ctx, out);
    if (*w) return cmd_weyl(weyl, ctx, out);
    if (*k) return cmd_check(check_file, check_radius, check_out, ctx, out);
    if (*p) return cmd_perturb(pert, ctx, out);
    if (*r) return cmd_growth(gr, ctx, out);
  } catch (const Error& e) {
    err << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << '\n';
    return is_usage_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace kslab
