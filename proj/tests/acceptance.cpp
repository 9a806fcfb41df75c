// Acceptance suite: one PASS/FAIL line per criterion. Exit status 0 only
// when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ksparse/error.hpp"
#include "ksparse/generators.hpp"
#include "ksparse/klaus_check.hpp"
#include "ksparse/perturb.hpp"
#include "ksparse/presentation.hpp"
#include "ksparse/spectral.hpp"
#include "ksparse/spectral_set.hpp"
#include "ksparse/weyl_lab.hpp"

using namespace ksparse;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a sub-check; the criterion passes only if all sub-checks do.
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

KlausSparsePresentation shipped(const std::string& name) {
  return assemble(read_plan_file(std::string(KSPARSE_DATA_DIR) + "/plans/" + name));
}

double top_eigenvalue(const WeightedGraph& g, Boundary b = Boundary::neumann) {
  return symmetric_eigenvalues(laplacian_matrix(g, b)).back();
}

double s_of_k(int k) { return 1.0 - std::sqrt(2.0) / 2.0 + 1.0 / (2.0 * k); }
double lambda_formula(double s) { return 4.0 / (s * (2.0 - s)); }

// ---------------------------------------------------------------------------

void weighted_line(Outcome& o) {
  const double top200 = top_eigenvalue(materialize(gen_line(0.5), 200).graph);
  const double top100 = top_eigenvalue(materialize(gen_line(0.5), 100).graph);
  const double err = std::abs(top200 - 16.0 / 3.0);
  o.detail << "top=" << fmt(top200) << " |top-16/3|=" << fmt(err) << " |r100-r200|=" << fmt(std::abs(top100 - top200));
  o.require(err < 1e-8, "|top - 16/3| < 1e-8");
  o.require(std::abs(top100 - top200) < 1e-10, "radius 100 vs 200 < 1e-10");
}

void accumulation_at_8(Outcome& o) {
  std::vector<double> lam;
  for (int k : {1, 10, 100, 1000}) {
    const double s = s_of_k(k);
    const double f = lambda_formula(s);
    const double t = top_eigenvalue(materialize(gen_line(s), 300).graph);
    o.require(std::abs(f - t) < 1e-8, "formula vs radius-300 truncation at k=" + std::to_string(k));
    lam.push_back(f);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < lam.size(); ++i) monotone = monotone && lam[i] > lam[i - 1] && lam[i] < 8.0;
  o.require(monotone, "monotone approach to 8");
  const double gap = std::abs(lam.back() - 8.0);
  o.detail << "lambda_1000=" << fmt(lam.back()) << " |lambda_1000-8|=" << fmt(gap);
  o.require(gap < 5e-3, "|lambda_1000 - 8| < 5e-3");

  const double cluster_tol = 0.05;
  std::vector<SpectrumApprox> spectra;
  bool attained = false;
  for (int k = 1; k <= 200; ++k) {
    spectra.push_back(spectrum(materialize(gen_line(s_of_k(k)), 300).graph, Boundary::neumann, 300));
    attained = attained || std::abs(spectra.back().eigenvalues.back() - 8.0) < 1e-8;
  }
  const auto closure = union_closure(spectra, cluster_tol);
  bool found = false;
  for (double a : closure.accumulation) {
    o.detail << " accumulation=" << fmt(a);
    found = found || std::abs(a - 8.0) < cluster_tol;
  }
  o.require(found, "union_closure reports an accumulation point at 8 (within cluster_tol)");
  o.require(!attained, "8 not attained by any lambda_k");
}

void three_star(Outcome& o) {
  const auto ev = symmetric_eigenvalues(laplacian_matrix(materialize(gen_three_star(), 60).graph, Boundary::neumann));
  const double top = ev.back();
  o.detail << "top=" << fmt(top) << " |top-9/2|=" << fmt(std::abs(top - 4.5)) << " next=" << fmt(ev[ev.size() - 2]);
  o.require(std::abs(top - 4.5) < 1e-8, "|top - 9/2| < 1e-8");
  o.require(ev[ev.size() - 2] <= 4.0 + 1e-12, "isolated above the band");
}

void band_fill(Outcome& o) {
  const std::size_t N = 2000;
  std::vector<Edge> edges;
  std::map<VertexId, double> m;
  for (std::size_t i = 0; i < N; ++i) m[vid(i)] = 1.0;
  for (std::size_t i = 0; i + 1 < N; ++i) edges.push_back({vid(i), vid(i + 1), 1.0});
  const auto g = build_graph(edges, m);
  const auto ev = symmetric_eigenvalues(laplacian_matrix(g, Boundary::neumann));
  double gap = 0.0, grid = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    grid = std::max(grid, std::abs(ev[j] - (2.0 - 2.0 * std::cos(std::numbers::pi * j / N))));
    if (j) gap = std::max(gap, ev[j] - ev[j - 1]);
  }
  const double h = hausdorff(ev, reference_spectrum("line_uniform"));
  o.detail << "min=" << fmt(ev.front()) << " max=" << fmt(ev.back()) << " max_gap=" << fmt(gap)
           << " hausdorff=" << fmt(h) << " |ev-grid|=" << fmt(grid);
  o.require(ev.front() < 1e-5, "min < 1e-5");
  o.require(ev.back() > 4.0 - 1e-5, "max > 4 - 1e-5");
  o.require(gap < 0.01, "max interior gap < 0.01");
  o.require(h < 0.01, "hausdorff to [0,4] < 0.01");
  o.require(grid < 1e-10, "matches 2-2cos(pi j/N)");
}

void transplant_intertwining(Outcome& o) {
  const auto p = shipped("starlike_weyl.plan");
  std::vector<WeylCertificate> moved;
  double worst = 0.0;
  auto record = [&](const WeylCertificate& before, const WeylCertificate& after) {
    const double rel = std::abs(after.residual - before.residual) /
                       std::max(std::abs(before.residual), std::abs(after.residual));
    worst = std::max(worst, rel);
    moved.push_back(after);
  };
  const auto star = eigvec_certificate(gen_three_star(), 4.5, 32);
  const auto wline = eigvec_certificate(gen_line(0.5), 16.0 / 3.0, 20);
  for (std::size_t a = 0; a < p.placements.size(); ++a) {
    const auto& cert = p.placements[a].k == 1 ? star : wline;
    auto emb = placement_embedding(cert, p, a);
    o.require(emb.has_value(), "localization certificate embeds at placement " + std::to_string(a));
    if (emb) record(cert, transplant(cert, *emb, p.window));
  }
  std::vector<VertexId> used;
  for (const auto& c : moved)
    for (const auto& [v, z] : c.vector) used.push_back(v);
  for (int rep = 0; rep < 2; ++rep)
    for (double lambda : {1.0, 2.0, 3.0}) {
      const auto cert = eigvec_certificate(gen_line(), lambda, 11);
      const auto after = medium_transplant(cert, p, std::nullopt, used);
      for (const auto& [v, z] : after.vector) used.push_back(v);
      record(cert, after);
    }
  const bool disjoint = supports_disjoint(moved);
  o.detail << "certificates=" << moved.size() << " max_rel_residual_change=" << fmt(worst)
           << " disjoint=" << (disjoint ? "yes" : "no");
  o.require(moved.size() == 10, "10 certificates");
  o.require(worst < 1e-12, "relative residual change < 1e-12");
  o.require(disjoint, "supports pairwise disjoint");
}

void amar(Outcome& o) {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> count(1, 100), dim(1, 50);
  std::normal_distribution<double> gauss;
  double worst = std::numeric_limits<double>::infinity();
  for (int inst = 0; inst < 1000; ++inst) {
    const int n = count(rng), d = dim(rng);
    std::vector<Eigen::VectorXcd> f(n, Eigen::VectorXcd(d));
    for (auto& v : f)
      for (int i = 0; i < d; ++i) v(i) = {gauss(rng), gauss(rng)};
    const auto theta = amar_phases(f);
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(d);
    double rhs = 0.0;
    for (int j = 0; j < n; ++j) {
      sum += std::polar(1.0, theta[j]) * f[j];
      rhs += f[j].squaredNorm();
    }
    worst = std::min(worst, sum.squaredNorm() / rhs);
  }
  o.detail << "min ||sum||^2 / sum ||f_j||^2 = " << fmt(worst);
  o.require(worst >= 1.0 - 1e-10, "every instance satisfies the bound");
}

void form_inequality(Outcome& o) {
  std::vector<std::pair<std::string, WeightedGraph>> graphs{
      {"line", materialize(gen_line(), 50).graph},
      {"line(0.5)", materialize(gen_line(0.5), 50).graph},
      {"three-star", materialize(gen_three_star(), 40).graph},
      {"z2", materialize(gen_z2(), 15).graph},
      {"z2-apex1", materialize(gen_z2_with_apexes(1), 12).graph},
      {"z2-apex2", materialize(gen_z2_with_apexes(2), 12).graph},
      {"antitree", materialize(gen_antitree(), 4).graph},
      {"antitree-z", materialize(gen_antitree_glued_line(), 4).graph},
      {"starlike", *shipped("starlike.plan").window},
      {"z2like", *shipped("z2like.plan").window},
  };
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  double worst_excess = -std::numeric_limits<double>::infinity(), worst_delta = 0.0;
  for (const auto& [name, g] : graphs) {
    const auto n = static_cast<Eigen::Index>(g.size());
    double sup_deg = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) sup_deg = std::max(sup_deg, g.degree(i));
    for (int t = 0; t < 500; ++t) {
      Function f(n);
      for (Eigen::Index i = 0; i < n; ++i) f(i) = {gauss(rng), gauss(rng)};
      const double q = inner_m(g, f, apply_laplacian(g, f)).real();
      double dq = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) dq += g.measure(i) * g.degree(i) * std::norm(f(i));
      const double nf = norm_m(g, f);
      const double scale = nf * nf * (1.0 + 2.0 * sup_deg);
      worst_excess = std::max({worst_excess, (q - 2.0 * dq) / scale, -q / scale});
    }
    for (std::size_t x = 0; x < g.size(); ++x) {
      Function d = Function::Zero(n);
      d(static_cast<Eigen::Index>(x)) = 1.0 / std::sqrt(g.measure(x));
      const double v = inner_m(g, d, apply_laplacian(g, d)).real();
      worst_delta = std::max(worst_delta, std::abs(v - g.degree(x)) / std::max(1.0, g.degree(x)));
    }
  }
  o.detail << "graphs=" << graphs.size() << " max_violation/scale=" << fmt(worst_excess)
           << " max|<d,Dd>-deg|=" << fmt(worst_delta);
  o.require(worst_excess <= 1e-10, "0 <= <f,Df> <= 2<f,deg f> + 1e-10 scale");
  o.require(worst_delta <= 1e-12, "<d_x,D d_x> = deg(x) to 1e-12");
}

void commutator(Outcome& o) {
  const auto p = shipped("starlike.plan");
  const auto cut = build_cutoff(p);
  const auto chk = commutator_bound_check(*p.window, cut.chi, 500, 42);
  const auto diag = compactness_diagnostic(cut, p);
  o.detail << "max_excess=" << fmt(chk.max_excess) << " scale=" << fmt(chk.scale) << " sups=";
  bool exact = diag.sups.size() == 3;
  for (std::size_t a = 0; a < diag.sups.size(); ++a) {
    const auto& pl = p.placements[a];
    const double expected = 2.0 / static_cast<double>(pl.r_ext - pl.r_int - 1);
    o.detail << (a ? "," : "") << fmt(diag.sups[a]);
    exact = exact && std::abs(diag.sups[a] - expected) <= 1e-14 * expected;
  }
  o.require(chk.ok, "|<f,[D,chi]f>| <= <f,G f> + 1e-10 scale");
  o.require(exact, "per-placement sup G = 2/(r_ext - r_int - 1)");
  o.require(diag.decreasing, "decreasing across placements");
}

void main_theorem(Outcome& o) {
  std::map<std::size_t, GraphGenerator> locs{{1, gen_three_star()}, {2, gen_line(0.5)}};
  const std::vector<SpectralSet> refs{reference_spectrum("three_star"), reference_spectrum("line_weighted", {0.5})};
  const auto ref = union_closure(refs, 0.05);
  std::map<Boundary, std::vector<double>> dist;
  for (std::size_t W : {150, 300, 600}) {
    const auto half = static_cast<std::int64_t>(W / 2);
    std::vector<PlacementPlan> plan{{0, 1, {-half}, W / 8, W / 4}, {0, 2, {half}, W / 8, W / 4}};
    const auto p = assemble_starlike(locs, plan, W);
    for (auto b : {Boundary::neumann, Boundary::dirichlet}) {
      const auto es = eigensystem(*p.window, b);
      const auto kept = filter_boundary_states(*p.window, es, W / 10).kept;
      dist[b].push_back(hausdorff(kept, ref));
    }
  }
  for (auto b : {Boundary::neumann, Boundary::dirichlet}) {
    const auto& d = dist[b];
    o.detail << to_string(b) << "=" << fmt(d[0]) << "," << fmt(d[1]) << "," << fmt(d[2]) << " ";
    o.require(d[1] < d[0] && d[2] < d[1], std::string(to_string(b)) + " distances decreasing");
    o.require(d[2] < 0.15, std::string(to_string(b)) + " distance < 0.15 at W=600");
  }
}

// Smallest r with (r+1)! > C 2^r, by exact integer comparison.
std::size_t brute_crossover(std::uint64_t C) {
  std::uint64_t fact = 1, pow2 = 1;
  for (std::size_t r = 0;; ++r) {
    fact *= r + 1;
    if (r) pow2 *= 2;
    if (fact > C * pow2) return r;
  }
}

void growth(Outcome& o) {
  for (std::uint64_t C : {1ULL, 1000ULL, 1000000ULL}) {
    const auto expected = brute_crossover(C);
    const auto rep = check_growth(gen_antitree(), 2.0, static_cast<double>(C), 16);
    const bool ok = rep.status == Status::fail && rep.witness["radius"] == expected;
    o.detail << "C=" << C << ":r=" << (rep.status == Status::fail ? rep.witness["radius"].dump() : "none") << "/"
             << expected << " ";
    o.require(ok, "antitree crossover for C=" + std::to_string(C));
  }
  const auto z = check_growth(gen_line(), 2.0, 4.0, 50);
  const auto z2 = check_growth(gen_z2(), 2.0, 4.0, 50);
  o.detail << "Z:" << to_string(z.status) << " Z2:" << to_string(z2.status);
  o.require(z.status == Status::pass, "Z passes (C, gamma) = (4, 2) up to radius 50");
  o.require(z2.status == Status::pass, "Z2 passes (C, gamma) = (4, 2) up to radius 50");
}

void perturbation(Outcome& o) {
  const auto g = materialize(gen_line(), 800).graph;
  const auto gt = scale_measure(g, labels::line(0), [](std::size_t d) { return 1.0 + 1.0 / (1.0 + d); });
  const auto pair = make_pair(g, gt, labels::line(0));
  const auto hyp = check_hypotheses(pair, 800);
  const auto F = F_domination(pair, 500, 3);
  double diff = 0.0;
  for (auto b : {Boundary::neumann, Boundary::dirichlet}) {
    const auto t = symmetric_eigenvalues(transported_matrix(pair, b));
    const auto d = symmetric_eigenvalues(laplacian_matrix(gt, b));
    for (std::size_t i = 0; i < t.size(); ++i) diff = std::max(diff, std::abs(t[i] - d[i]));
  }
  const auto cmp = compare_spectra(pair, Boundary::dirichlet, 100);
  o.detail << "hypotheses=" << (hyp.pass ? "pass" : "fail") << " F_max_excess=" << fmt(F.max_excess)
           << " transported_diff=" << fmt(diff) << " filtered_hausdorff=" << fmt(cmp.filtered);
  o.require(hyp.pass, "hypothesis checker passes");
  o.require(F.ok, "F-domination holds for 500 random f");
  o.require(diff < 1e-10, "transported vs direct spectrum < 1e-10");
  o.require(cmp.filtered < 0.05, "filtered Hausdorff distance < 0.05");
}

// Next vertex on a shortest path from v to the window base.
VertexId toward_base(const KlausSparsePresentation& p, VertexId v, std::size_t steps) {
  const auto& g = *p.window;
  const auto d = bfs_distances(g, g.index_of(p.base));
  auto i = g.index_of(v);
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t best = i;
    for (const auto& nb : g.neighbors(i))
      if (d[nb.index] < d[best] || (d[nb.index] == d[best] && best != i && g.id(nb.index) < g.id(best)))
        best = nb.index;
    i = best;
  }
  return g.id(i);
}

void definition_checks(Outcome& o) {
  for (const char* name : {"starlike.plan", "z2like.plan"}) {
    const auto p = shipped(name);
    for (const auto& rep : {check_pattern_inclusion(p), check_components(p), check_disjointness(p)}) {
      o.require(rep.status == Status::pass, std::string(name) + " condition " + rep.condition);
      o.detail << name << ":" << rep.condition << "=" << to_string(rep.status) << " ";
    }
  }

  // perturbed pattern edge
  {
    const auto p = shipped("starlike.plan");
    const auto& w = *p.window;
    const auto c = p.placements[0].center;
    const auto nb = w.id(w.neighbors(w.index_of(c))[0].index);
    const auto bad = p.with_window(with_edge_weight(w, c, nb, 1.1));
    const auto rep = check_pattern_inclusion(bad);
    bool replay = false;
    if (rep.status == Status::fail) {
      const auto& e = rep.witness["failures"][0]["edges"][0];
      const std::vector<std::uint64_t> edge = e["edge"];
      const auto& g = *bad.window;
      const double got = g.weight(g.index_of(vid(edge[0])), g.index_of(vid(edge[1])));
      replay = got == e["window_weight"].get<double>() && got != e["localization_weight"].get<double>();
    }
    o.detail << "mutation(weight)=" << to_string(rep.status) << (replay ? "+replayed " : " ");
    o.require(rep.status == Status::fail && replay, "perturbed edge weight fails with replayable witness");
  }
  // overlapping balls
  {
    auto bad = shipped("starlike.plan");
    bad.placements[1].center = toward_base(bad, bad.placements[0].center, 1);
    const auto rep = check_disjointness(bad);
    bool replay = false;
    if (rep.status == Status::fail) {
      const std::vector<std::uint64_t> centers = rep.witness["centers"];
      const std::vector<std::size_t> radii = rep.witness["r_ext"];
      const auto v = vid(rep.witness["vertex"].get<std::uint64_t>());
      replay = *distance(*bad.window, vid(centers[0]), v) <= radii[0] &&
               *distance(*bad.window, vid(centers[1]), v) <= radii[1];
    }
    o.detail << "mutation(overlap)=" << to_string(rep.status) << (replay ? "+replayed " : " ");
    o.require(rep.status == Status::fail && replay, "overlapping balls fail with replayable witness");
  }
  // apex inside an outer component
  {
    const auto p = shipped("z2like.plan");
    const auto& g = *p.window;
    // a unit face at distance >= 6 from both placements
    VertexId v{};
    for (auto x : g.vertices())
      if (*distance(g, x, p.placements[0].center) >= 6 && *distance(g, x, p.placements[1].center) >= 6 &&
          *distance(g, x, p.base) <= 5) {
        v = x;
        break;
      }
    const auto nbs = g.neighbors(g.index_of(v));
    const auto a = nbs[0].index;
    std::size_t b = 0, corner = 0;
    for (std::size_t t = 1; t < nbs.size() && corner == 0; ++t)
      for (const auto& na : g.neighbors(a))
        if (na.index != g.index_of(v) && g.weight(na.index, nbs[t].index) > 0) {
          b = nbs[t].index;
          corner = na.index;
          break;
        }
    const auto apex = vid((1ULL << 63) | 77);
    std::vector<std::pair<VertexId, double>> edges{{v, 1.0}, {g.id(a), 1.0}, {g.id(b), 1.0}, {g.id(corner), 1.0}};
    const auto bad = p.with_window(with_vertex(g, apex, 1.0, edges));
    const auto rep = check_components(bad);
    bool replay = false;
    if (rep.status == Status::fail) {
      const std::vector<std::uint64_t> obs = rep.witness["failures"][0]["local_obstructions"];
      const auto& bw = *bad.window;
      const auto one = induced(bw, ball(bw, apex, 1));
      const auto z = materialize(gen_z2(), 2);
      replay = std::find(obs.begin(), obs.end(), raw(apex)) != obs.end() &&
               !find_rooted_embedding(one, apex, z.graph, z.root);
    }
    o.detail << "mutation(apex)=" << to_string(rep.status) << (replay ? "+replayed" : "");
    o.require(rep.status == Status::fail && replay, "apex in component fails with replayable witness");
  }
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;  // 0: no runtime bound
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<Criterion> criteria{
      {1, "weighted-Z isolated eigenvalue 16/3", 5, weighted_line},
      {2, "accumulation of isolated eigenvalues at 8", 120, accumulation_at_8},
      {3, "three-star isolated eigenvalue 9/2", 5, three_star},
      {4, "band fill of the Z truncation", 60, band_fill},
      {5, "transplant intertwining", 30, transplant_intertwining},
      {6, "Amar phase lemma", 10, amar},
      {7, "form inequality", 0, form_inequality},
      {8, "commutator bound", 0, commutator},
      {9, "main theorem at desk scale", 300, main_theorem},
      {10, "growth violation", 0, growth},
      {11, "perturbation stability", 180, perturbation},
      {12, "Klaus-sparse definition checks", 0, definition_checks},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.contains(c.id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      o.pass = false;
      o.detail << " [runtime over " << c.budget_seconds << " s]";
    }
    if (!o.pass) ++failed;
    std::printf("%s  %2d  %-44s %6.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
