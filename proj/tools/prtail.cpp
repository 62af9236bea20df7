#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "prtail/errors.hpp"
#include "prtail/fixedpoint.hpp"
#include "prtail/graph.hpp"
#include "prtail/growingnet.hpp"
#include "prtail/rvmodel.hpp"
#include "prtail/tailstats.hpp"
#include "prtail/theory.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace prtail;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit : int { ok = 0, parameter = 2, io = 3, numeric = 4 };

class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : root_(path) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_)) throw IoError("cannot create output directory " + path);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path path = root_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string());
    body(out);
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
    files_.push_back(name);
  }

  void manifest(const std::string& command, json parameters, json results = json::object()) {
    json m;
    m["tool"] = "prtail";
    m["version"] = kVersion;
    m["command"] = command;
    m["parameters"] = std::move(parameters);
    if (!results.empty()) m["results"] = std::move(results);
    m["outputs"] = files_;
    std::ofstream out(root_ / "manifest.json", std::ios::binary);
    if (!out) throw IoError("cannot write manifest");
    out << m.dump(2) << '\n';
    if (!out) throw IoError("cannot write manifest");
  }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

json fit_json(const TailFit& f) {
  return {{"x_min", f.x_min}, {"alpha", f.alpha_ccdf}, {"n_tail", f.n_tail}, {"stderr", f.std_error}};
}

json fit_json(const std::optional<TailFit>& f) { return f ? fit_json(*f) : json(nullptr); }

// Tiny or degenerate inputs have no tail to fit.
std::optional<TailFit> try_fit(std::span<const double> values, double fraction) {
  try {
    return fit_top_fraction(values, fraction);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string show(std::optional<double> v) {
  if (!v) return "n/a";
  std::ostringstream os;
  os.precision(12);
  os << *v;
  return os.str();
}

std::optional<double> alpha_of(const std::optional<TailFit>& f) {
  return f ? std::optional<double>(f->alpha_ccdf) : std::nullopt;
}

DanglingPolicy parse_dangling(const std::string& s) {
  if (s == "redistribute") return DanglingPolicy::redistribute;
  if (s == "drop") return DanglingPolicy::drop;
  throw ParameterError("unknown dangling policy " + s);
}

SlowlyVarying parse_tail(const std::string& s) {
  if (s == "pareto") return SlowlyVarying::constant;
  if (s == "log") return SlowlyVarying::logarithmic;
  throw ParameterError("unknown tail family " + s);
}

struct PagerankArgs {
  std::string graph;
  double c = 0.85;
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  std::string dangling = "redistribute";
  bool keep_duplicates = false;
  double xmin_fraction = 0.1;
  std::string out = "out";
};

int run_pagerank(const PagerankArgs& a) {
  if (!(a.xmin_fraction > 0.0 && a.xmin_fraction <= 1.0)) {
    throw ParameterError("--xmin-fraction must lie in (0, 1]");
  }
  if (!(a.c > 0.0 && a.c < 1.0)) throw ParameterError("damping factor c must lie in (0, 1)");
  PageRankOptions opt;
  opt.c = a.c;
  opt.tol = a.tol;
  opt.max_iter = a.max_iter;
  opt.dangling = parse_dangling(a.dangling);
  const auto parsed = read_edge_list_file(a.graph, ParseOptions{a.keep_duplicates});
  const auto& g = parsed.graph;
  const auto pr = pagerank(g, opt);
  if (!pr.converged) {
    throw NumericError("power iteration did not converge within " + std::to_string(opt.max_iter) +
                       " iterations");
  }
  const auto degrees = degree_histograms(g);
  const auto pr_fit = try_fit(pr.values, a.xmin_fraction);
  const auto in_fit = try_fit(degrees.in.values, a.xmin_fraction);

  OutputDir out(a.out);
  out.write("pagerank.txt", [&](std::ostream& o) { write_pagerank(o, pr, parsed.original_ids); });
  out.write("pagerank_ccdf.csv", [&](std::ostream& o) { write_ccdf_csv(o, ccdf(pr.values)); });
  out.write("in_degree_ccdf.csv", [&](std::ostream& o) { write_ccdf_csv(o, ccdf(degrees.in)); });
  out.write("tail_fits.txt", [&](std::ostream& o) {
    if (pr_fit) write_tail_fit(o, *pr_fit, "pagerank");
    if (in_fit) write_tail_fit(o, *in_fit, "in_degree");
  });

  json params{{"graph", a.graph},         {"c", a.c},
              {"tol", a.tol},             {"max_iter", a.max_iter},
              {"dangling", a.dangling},   {"keep_duplicates", a.keep_duplicates},
              {"xmin_fraction", a.xmin_fraction}};
  json results{{"nodes", g.node_count()},         {"edges", g.edge_count()},
               {"mean_out_degree", degrees.mean_out}, {"iterations", pr.iterations},
               {"residual", pr.residual},         {"pagerank_fit", fit_json(pr_fit)},
               {"in_degree_fit", fit_json(in_fit)}};
  out.manifest("pagerank", params, results);
  std::cout << "nodes " << g.node_count() << " edges " << g.edge_count() << " iterations "
            << pr.iterations;
  if (pr_fit) std::cout << " alpha(pagerank) " << pr_fit->alpha_ccdf;
  if (in_fit) std::cout << " alpha(in-degree) " << in_fit->alpha_ccdf;
  std::cout << '\n';
  return ok;
}

struct ModelArgs {
  double c = 0.85;
  double d = 8.0;
  double alpha = 1.1;
  std::string tail = "pareto";
  std::size_t pool = 1'000'000;
  std::size_t generations = 30;
  std::uint64_t seed = 1;
  double xmin_fraction = 0.01;
  std::string out = "out";
};

struct ModelRun {
  SampleSet n_t;
  SolveResult r;
  std::optional<TailFit> n_t_fit;
  std::optional<TailFit> r_fit;
  std::optional<double> offset;
  double predicted = 0.0;
};

ModelRun run_model_pipeline(const ModelArgs& a, double c) {
  ModelParams params{c, a.d, a.alpha};
  params.validate();
  if (!(a.alpha > 1.0)) throw ParameterError("alpha must exceed 1");
  if (!(a.xmin_fraction > 0.0 && a.xmin_fraction <= 1.0)) {
    throw ParameterError("--xmin-fraction must lie in (0, 1]");
  }
  const auto model = InDegreeModel::mixed(TailSpec::with_mean(a.alpha, a.d, parse_tail(a.tail)));
  ModelRun run;
  run.predicted = factor(c, a.d, a.alpha).log10_y();
  run.n_t = sample_in_degree(model, a.pool, a.seed);
  SolveOptions opt;
  opt.pool_size = a.pool;
  opt.generations = a.generations;
  run.r = solve_r(params, model, opt, a.seed);
  run.n_t_fit = try_fit(run.n_t.values, a.xmin_fraction);
  run.r_fit = try_fit(run.r.samples.values, a.xmin_fraction);
  try {
    run.offset = log_ccdf_offset(ccdf(run.r.samples), ccdf(run.n_t));
  } catch (const ParameterError&) {
    // A near-degenerate R has no mass inside the N(T) tail band.
  }
  return run;
}

json model_params_json(const ModelArgs& a) {
  return {{"c", a.c},       {"d", a.d},       {"alpha", a.alpha},
          {"tail", a.tail}, {"pool", a.pool}, {"generations", a.generations},
          {"seed", a.seed}, {"xmin_fraction", a.xmin_fraction}};
}

int run_model(const ModelArgs& a) {
  const auto run = run_model_pipeline(a, a.c);
  OutputDir out(a.out);
  out.write("n_t_samples.txt", [&](std::ostream& o) { write_samples(o, run.n_t); });
  out.write("r_samples.txt", [&](std::ostream& o) { write_samples(o, run.r.samples); });
  out.write("n_t_ccdf.csv", [&](std::ostream& o) { write_ccdf_csv(o, ccdf(run.n_t)); });
  out.write("r_ccdf.csv", [&](std::ostream& o) { write_ccdf_csv(o, ccdf(run.r.samples)); });
  out.write("tail_fits.txt", [&](std::ostream& o) {
    if (run.n_t_fit) write_tail_fit(o, *run.n_t_fit, "N(T)");
    if (run.r_fit) write_tail_fit(o, *run.r_fit, "R");
  });
  out.write("diagnostics.csv", [&](std::ostream& o) { write_diagnostics_csv(o, run.r.diagnostics); });
  out.write("top_values.csv", [&](std::ostream& o) { write_top_values_csv(o, run.r.diagnostics); });
  json results{{"r_mean", run.r.samples.mean()},
               {"r_min", *std::min_element(run.r.samples.values.begin(), run.r.samples.values.end())},
               {"final_ks", run.r.final_ks},
               {"converged", run.r.converged},
               {"n_t_fit", fit_json(run.n_t_fit)},
               {"r_fit", fit_json(run.r_fit)},
               {"observed_log10_offset", run.offset ? json(*run.offset) : json(nullptr)},
               {"predicted_log10_y", run.predicted}};
  out.manifest("model", model_params_json(a), results);
  std::cout << "mean(R) " << run.r.samples.mean() << " alpha(R) " << show(alpha_of(run.r_fit))
            << " alpha(N(T)) " << show(alpha_of(run.n_t_fit)) << " offset " << show(run.offset)
            << " predicted " << run.predicted << '\n';
  if (!run.r.converged) std::cerr << "warning: KS change above threshold at the last generation\n";
  return ok;
}

struct GrowthArgs {
  double beta = 0.2;
  std::uint32_t d = 8;
  std::size_t n = 50'000;
  std::uint64_t seed = 1;
  std::string out = "out";
};

int run_generate(const GrowthArgs& a) {
  GrowthParams p{a.beta, a.d, a.n, a.seed};
  p.validate();
  const auto g = generate(p);
  const auto degrees = degree_histograms(g);
  OutputDir out(a.out);
  out.write("graph.txt", [&](std::ostream& o) { write_edge_list(o, g); });
  out.write("in_degree_ccdf.csv", [&](std::ostream& o) { write_ccdf_csv(o, ccdf(degrees.in)); });
  out.manifest("generate-gn",
               {{"beta", a.beta}, {"d", a.d}, {"n", a.n}, {"seed", a.seed}},
               {{"nodes", g.node_count()}, {"edges", g.edge_count()}});
  std::cout << "nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
  return ok;
}

int run_compare(const ModelArgs& a, const std::vector<double>& grid) {
  if (grid.empty()) throw ParameterError("the c grid is empty");
  std::vector<ModelRun> runs;
  for (double c : grid) runs.push_back(run_model_pipeline(a, c));
  OutputDir out(a.out);
  out.write("compare.csv", [&](std::ostream& o) {
    o.precision(12);
    o << "c,predicted_log10_y,observed_log10_offset,difference,r_mean,alpha_r,alpha_n_t\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& r = runs[i];
      const std::string diff = r.offset ? show(*r.offset - r.predicted) : show(std::nullopt);
      o << grid[i] << ',' << r.predicted << ',' << show(r.offset) << ',' << diff << ','
        << r.r.samples.mean() << ',' << show(alpha_of(r.r_fit)) << ','
        << show(alpha_of(r.n_t_fit)) << '\n';
    }
  });
  out.write("factor_curve.csv", [&](std::ostream& o) {
    std::vector<double> cs;
    for (int k = 1; k <= 99; ++k) cs.push_back(k / 100.0);
    write_factor_table(o, cs, a.d, a.alpha);
  });
  json params = model_params_json(a);
  params.erase("c");
  params["c_grid"] = grid;
  out.manifest("compare", params);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::cout << "c " << grid[i] << " predicted " << runs[i].predicted << " observed "
              << show(runs[i].offset) << '\n';
  }
  return ok;
}

void add_model_options(CLI::App* cmd, ModelArgs& a) {
  cmd->add_option("--d", a.d, "mean out-degree");
  cmd->add_option("--alpha", a.alpha, "tail index of T");
  cmd->add_option("--tail", a.tail, "tail family of T: pareto or log");
  cmd->add_option("--pool", a.pool, "population size");
  cmd->add_option("--generations", a.generations, "population-dynamics generations");
  cmd->add_option("--seed", a.seed, "master seed");
  cmd->add_option("--xmin-fraction", a.xmin_fraction, "top fraction used by the tail fits");
  cmd->add_option("--out", a.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PageRank and in-degree tail toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  PagerankArgs pr;
  auto* pr_cmd = app.add_subcommand("pagerank", "PageRank of an edge-list graph");
  pr_cmd->add_option("graph", pr.graph, "edge-list file")->required();
  pr_cmd->add_option("--c", pr.c, "damping factor");
  pr_cmd->add_option("--tol", pr.tol, "L1 tolerance per node");
  pr_cmd->add_option("--max-iter", pr.max_iter, "iteration cap");
  pr_cmd->add_option("--dangling", pr.dangling, "redistribute or drop");
  pr_cmd->add_flag("--keep-duplicates", pr.keep_duplicates, "keep repeated edges");
  pr_cmd->add_option("--xmin-fraction", pr.xmin_fraction, "top fraction used by the tail fits");
  pr_cmd->add_option("--out", pr.out, "output directory");

  ModelArgs model;
  auto* model_cmd = app.add_subcommand("model", "Monte-Carlo solution of the PageRank equation");
  model_cmd->add_option("--c", model.c, "damping factor");
  add_model_options(model_cmd, model);

  GrowthArgs growth;
  auto* gn_cmd = app.add_subcommand("generate-gn", "growing network with mixed attachment");
  gn_cmd->add_option("--beta", growth.beta, "probability of a uniform target");
  gn_cmd->add_option("--d", growth.d, "out-links per node");
  gn_cmd->add_option("--n", growth.n, "final node count");
  gn_cmd->add_option("--seed", growth.seed, "seed");
  gn_cmd->add_option("--out", growth.out, "output directory");

  ModelArgs cmp;
  std::vector<double> grid;
  auto* cmp_cmd = app.add_subcommand("compare", "predicted vs observed tail offsets over c");
  cmp_cmd->add_option("--c", grid, "damping factors")->delimiter(',')->required();
  add_model_options(cmp_cmd, cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return parameter;
  }

  try {
    if (*pr_cmd) return run_pagerank(pr);
    if (*model_cmd) return run_model(model);
    if (*gn_cmd) return run_generate(growth);
    if (*cmp_cmd) return run_compare(cmp, grid);
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return parameter;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return io;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return io;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return numeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return parameter;
  }
  return parameter;
}
