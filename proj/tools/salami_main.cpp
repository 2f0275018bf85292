#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "salami/curvature.hpp"
#include "salami/harmonic.hpp"
#include "salami/io.hpp"
#include "salami/verify.hpp"

using namespace salami;

namespace {

std::uint64_t env_seed() {
  const char* s = std::getenv("SALAMI_SEED");
  if (!s || !*s) return 0;
  return std::strtoull(s, nullptr, 10);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

struct FamilyFlags {
  std::string family;
  int radius = 0;  // 0: family default
  int k = 3;
  int copies = 2;
  std::string w_seq = "const:1";
  std::string m_seq = "const:1";
  std::string metric = "d0";

  FamilySpec spec() const {
    return FamilySpec{family, radius, k, copies, w_seq, m_seq, metric};
  }
  void attach(CLI::App* cmd, bool family_flag) {
    if (family_flag) cmd->add_option("--family", family, "family name");
    cmd->add_option("--radius", radius, "window radius");
    cmd->add_option("--k", k, "glued_chains: branch count");
    cmd->add_option("--copies", copies, "folded_product: 1 or 2 copies");
    cmd->add_option("--w-seq", w_seq, "weight pattern: const:<r>, alt:<a>,<b>, abs, zero");
    cmd->add_option("--m-seq", m_seq, "measure pattern");
    cmd->add_option("--metric", metric, "birth_death: d0 or reciprocal");
  }
};

/// Loads the working graph either from --graph JSON or from family flags.
struct InputLoader {
  std::string graph_path;
  std::string partition_path;
  FamilyFlags fam_flags;
  bool assume_salami = false;

  FamilyOutput load_graph_only() const {
    if (!graph_path.empty()) {
      auto j = nlohmann::json::parse(read_file(graph_path), nullptr, false);
      if (j.is_discarded()) fail(ErrorCode::ParseError, "not JSON: '" + graph_path + "'");
      FamilyOutput out{graph_from_json(j), {}, {}};
      out.fixtures.salami = assume_salami;
      out.fixtures.note = "external graph";
      return out;
    }
    if (fam_flags.family.empty())
      fail(ErrorCode::BadSpec, "either --graph or --family is required");
    return generate_family(fam_flags.spec());
  }

  FamilyOutput load() const {
    auto out = load_graph_only();
    bool external = !graph_path.empty();
    if (external && partition_path.empty())
      fail(ErrorCode::BadSpec, "--partition is required with --graph");
    if (!partition_path.empty()) {
      auto pj = nlohmann::json::parse(read_file(partition_path), nullptr, false);
      if (pj.is_discarded()) fail(ErrorCode::ParseError, "not JSON: '" + partition_path + "'");
      auto p = partition_from_json(out.graph, pj);
      out.fixtures.default_K.clear();
      out.fixtures.explicit_X.reset();
      out.fixtures.explicit_Y.reset();
      for (int v : p.K) out.fixtures.default_K.push_back(out.graph.id(v));
      if (!p.X.empty()) {
        std::vector<std::string> xs, ys;
        for (int v : p.X) xs.push_back(out.graph.id(v));
        for (int v : p.Y) ys.push_back(out.graph.id(v));
        out.fixtures.explicit_X = std::move(xs);
        out.fixtures.explicit_Y = std::move(ys);
      }
    }
    return out;
  }

  SalamiPartition partition(const FamilyOutput& fam) const {
    std::vector<int> K, X, Y;
    for (const auto& id : fam.fixtures.default_K) K.push_back(fam.graph.vertex(id));
    if (K.empty()) fail(ErrorCode::BadSpec, "no partition given and the family has no default");
    if (fam.fixtures.explicit_X)
      for (const auto& id : *fam.fixtures.explicit_X) X.push_back(fam.graph.vertex(id));
    if (fam.fixtures.explicit_Y)
      for (const auto& id : *fam.fixtures.explicit_Y) Y.push_back(fam.graph.vertex(id));
    return make_partition(fam.graph, K, X, Y);
  }
};

int cmd_gen(const FamilyFlags& flags, const std::string& out_path) {
  auto fam = generate_family(flags.spec());
  std::string graph = graph_to_json(fam.graph).dump(2) + "\n";
  std::string fixtures = fixtures_to_json(fam.fixtures).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << graph;
    return 0;
  }
  write_file(out_path, graph);
  write_file(out_path + ".fixtures.json", fixtures);
  std::cout << "wrote " << out_path << " (" << fam.graph.n() << " vertices, "
            << fam.graph.edge_list().size() << " edges) and " << out_path << ".fixtures.json\n";
  return 0;
}

int cmd_curvature(const InputLoader& in, const std::vector<std::string>& region_ids,
                  const std::string& format, const std::string& out_path,
                  const std::string& witness_path) {
  auto fam = in.load_graph_only();
  const auto& g = fam.graph;
  auto metric = path_metric(g);

  std::vector<char> in_region(g.n(), 1);
  if (!region_ids.empty()) {
    in_region.assign(g.n(), 0);
    for (const auto& id : region_ids) in_region[g.vertex(id)] = 1;
  }

  std::ostringstream csv;
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json witnesses = nlohmann::json::array();
  csv << "x,y,d,kappa_dual,kappa_primal,kappa_closed,reliable\n";
  for (auto [u, v] : g.edge_list()) {
    if (!in_region[u] && !in_region[v]) continue;
    auto dual = curvature_dual(g, metric, u, v);
    auto primal = curvature_primal(g, metric, u, v);
    std::string closed;
    if (metric.mode() == MetricMode::Combinatorial) {
      if (g.is_tree())
        closed = format_number(to_double(curvature_tree(g, u, v)));
      else {
        try {
          closed = format_number(to_double(curvature_lattice(g, metric, u, v)));
        } catch (const Error&) {
        }
      }
    }
    csv << g.id(u) << "," << g.id(v) << "," << format_number(metric.distance_d(u, v)) << ","
        << format_number(to_double(dual.kappa)) << "," << format_number(to_double(primal.kappa))
        << "," << closed << "," << (dual.reliable && primal.reliable ? "true" : "false") << "\n";
    if (format == "json") {
      nlohmann::json row;
      row["x"] = g.id(u);
      row["y"] = g.id(v);
      row["d"] = format_number(metric.distance_d(u, v));
      row["kappa_dual"] = rat_to_string(dual.kappa);
      row["kappa_primal"] = rat_to_string(primal.kappa);
      if (!closed.empty()) row["kappa_closed"] = closed;
      row["reliable"] = dual.reliable && primal.reliable;
      rows.push_back(std::move(row));
    }
    if (!witness_path.empty()) {
      nlohmann::json w;
      w["x"] = g.id(u);
      w["y"] = g.id(v);
      nlohmann::json pot;
      for (auto [vid, val] : dual.potential) pot[g.id(vid)] = rat_to_string(val);
      w["potential"] = std::move(pot);
      nlohmann::json plan = nlohmann::json::array();
      for (auto [a, b, mass] : primal.plan) {
        nlohmann::json entry;
        entry["from"] = g.id(a);
        entry["to"] = g.id(b);
        entry["mass"] = rat_to_string(mass);
        plan.push_back(std::move(entry));
      }
      w["plan"] = std::move(plan);
      witnesses.push_back(std::move(w));
    }
  }
  if (!witness_path.empty()) write_file(witness_path, witnesses.dump(2) + "\n");
  emit(out_path, format == "json" ? rows.dump(2) + "\n" : csv.str());
  return 0;
}

int cmd_harmonic(const InputLoader& in, double epsilon, double tol, int max_iter,
                 const std::string& format, const std::string& out_path,
                 const std::string& extension_csv_path) {
  auto fam = in.load();
  auto metric = path_metric(fam.graph);
  auto p = in.partition(fam);
  auto res = synthesize(fam.graph, metric, p,
                        {.epsilon = epsilon, .tol = tol, .max_iter = max_iter, .refine = true});
  if (!extension_csv_path.empty()) {
    std::vector<double> on_k;
    for (int v : p.K) on_k.push_back(res.field[v]);
    write_file(extension_csv_path, extension_to_csv(fam.graph, extend(fam.graph, metric, p, on_k)));
  }
  nlohmann::json out;
  out["converged"] = res.converged;
  out["iterations"] = res.iterations;
  out["residual"] = format_number(res.residual);
  out["c"] = format_number(res.c);
  out["epsilon"] = format_number(res.epsilon);
  out["reliable"] = res.reliable;
  out["exact_certificate"] = res.exact_field.has_value();
  nlohmann::json values;
  for (int v = 0; v < fam.graph.n(); ++v) values[fam.graph.id(v)] = format_number(res.field[v]);
  out["values"] = std::move(values);
  nlohmann::json hist = nlohmann::json::array();
  for (double r : res.residual_history) hist.push_back(format_number(r));
  out["residual_history"] = std::move(hist);
  (void)format;
  emit(out_path, out.dump(2) + "\n");
  return res.converged ? 0 : 1;
}

int cmd_verify(const InputLoader& in, std::vector<std::string> suites, const std::string& format,
               const std::string& out_path) {
  auto fam = in.load();
  if (suites.empty()) suites = {"all"};
  auto rep = run_verify(fam, suites, env_seed());
  rep.command = "verify";
  std::string body = format == "json"   ? report_to_json(rep)
                     : format == "csv" ? report_to_csv(rep)
                                       : report_to_text(rep);
  emit(out_path, body);
  return rep.exit_code;
}

int cmd_analysis(const InputLoader& in, int r_max, const std::string& out_path) {
  auto fam = in.load();
  auto metric = path_metric(fam.graph);
  auto p = in.partition(fam);
  std::ostringstream csv;
  csv << "R,doubling,poincare,harnack,chengyau\n";
  for (int R = 1; R <= r_max; ++R) {
    auto ratios = analysis_ratios(fam.graph, metric, p.K[0], R, env_seed(), 20);
    if (!ratios.reliable) continue;  // rows beyond the window are omitted
    csv << R << "," << format_number(ratios.doubling) << "," << format_number(ratios.poincare)
        << "," << format_number(ratios.harnack) << "," << format_number(ratios.chengyau) << "\n";
  }
  emit(out_path, csv.str());
  return 0;
}

int cmd_recurrence(const InputLoader& in, int r_max, const std::string& out_path) {
  auto fam = in.load();
  auto metric = path_metric(fam.graph);
  auto p = in.partition(fam);
  auto res = synthesize(fam.graph, metric, p, {});
  if (!res.converged) {
    std::cerr << "synthesis did not converge; no harmonic field for the quotients\n";
    return 1;
  }
  auto rows = recurrence_series(fam.graph, res.field, r_max);
  std::ostringstream csv;
  csv << "R,quotient,reliable\n";
  for (const auto& row : rows)
    csv << format_number(row.R) << "," << format_number(row.quotient) << ","
        << (row.reliable ? "true" : "false") << "\n";
  emit(out_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"window toolkit for curvature, extremal Lipschitz extensions and harmonic fields"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a family window plus fixtures");
  FamilyFlags gen_flags;
  gen->add_option("family", gen_flags.family, "family name")->required();
  bool radius_set = false;
  gen->add_option("--radius", gen_flags.radius, "window radius")
      ->each([&](const std::string&) { radius_set = true; });
  gen->add_option("--k", gen_flags.k, "glued_chains: branch count");
  gen->add_option("--copies", gen_flags.copies, "folded_product: 1 or 2 copies");
  gen->add_option("--w-seq", gen_flags.w_seq, "weight pattern");
  gen->add_option("--m-seq", gen_flags.m_seq, "measure pattern");
  gen->add_option("--metric", gen_flags.metric, "birth_death: d0 or reciprocal");
  std::string gen_out;
  gen->add_option("--out", gen_out, "output path (graph JSON; fixtures sidecar next to it)");

  // shared input flags builder
  auto add_inputs = [](CLI::App* cmd, InputLoader& in) {
    cmd->add_option("--graph", in.graph_path, "graph JSON path");
    cmd->add_option("--partition", in.partition_path, "partition JSON path");
    in.fam_flags.attach(cmd, true);
    cmd->add_flag("--assume-salami", in.assume_salami,
                  "treat an external graph as a salami window for hypothesis gating");
  };

  auto* curv = app.add_subcommand("curvature", "per-edge curvature table (both solver routes)");
  InputLoader curv_in;
  add_inputs(curv, curv_in);
  std::vector<std::string> curv_region;
  std::string curv_format = "csv", curv_out, curv_witness;
  curv->add_option("--region", curv_region, "restrict to edges meeting these vertex ids");
  curv->add_option("--format", curv_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  curv->add_option("--out", curv_out, "output path (stdout when omitted)");
  curv->add_option("--witness", curv_witness, "also dump optimizer witnesses to this JSON file");

  auto* harm = app.add_subcommand("harmonic", "synthesize the harmonic field for a partition");
  InputLoader harm_in;
  add_inputs(harm, harm_in);
  double eps = 0, tol = 1e-9;
  int max_iter = 500;
  std::string harm_format = "json", harm_out, harm_ext_csv;
  harm->add_option("--epsilon", eps, "step size (default: 0.9 / max pair degree sum)");
  harm->add_option("--tol", tol, "spread tolerance for the K-Laplacian");
  harm->add_option("--max-iter", max_iter, "iteration cap");
  harm->add_option("--format", harm_format, "json")->check(CLI::IsMember({"json"}));
  harm->add_option("--out", harm_out, "output path");
  harm->add_option("--extension-csv", harm_ext_csv, "also dump the extension with witnesses");

  auto* verify = app.add_subcommand("verify", "replay the claim catalog against a window");
  InputLoader verify_in;
  add_inputs(verify, verify_in);
  std::vector<std::string> suites;
  std::string verify_format = "text", verify_out;
  verify->add_option("--suite", suites, "all, a catalog-id prefix, or an alias (ends, golden, ...)");
  verify->add_option("--format", verify_format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  verify->add_option("--out", verify_out, "output path");

  auto* rec = app.add_subcommand("recurrence", "tent-quotient series for the synthesized field");
  InputLoader rec_in;
  add_inputs(rec, rec_in);
  int r_max = 16;
  std::string rec_out;
  rec->add_option("--r-max", r_max, "largest tent radius");
  rec->add_option("--out", rec_out, "output path");

  auto* ana = app.add_subcommand("analysis", "doubling/Poincare/Harnack/Cheng-Yau ratio table");
  InputLoader ana_in;
  add_inputs(ana, ana_in);
  int ana_rmax = 8;
  std::string ana_out;
  ana->add_option("--r-max", ana_rmax, "largest ball radius");
  ana->add_option("--out", ana_out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      if (!radius_set)
        fail(ErrorCode::BadSpec,
             "missing --radius; usage: salami gen <family> --radius N [--out path]");
      return cmd_gen(gen_flags, gen_out);
    }
    if (curv->parsed()) return cmd_curvature(curv_in, curv_region, curv_format, curv_out, curv_witness);
    if (harm->parsed())
      return cmd_harmonic(harm_in, eps, tol, max_iter, harm_format, harm_out, harm_ext_csv);
    if (verify->parsed()) return cmd_verify(verify_in, suites, verify_format, verify_out);
    if (rec->parsed()) return cmd_recurrence(rec_in, r_max, rec_out);
    if (ana->parsed()) return cmd_analysis(ana_in, ana_rmax, ana_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
