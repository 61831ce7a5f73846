// netsel: command-line front end for network-guided feature selection.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include "netsel/modsearch.hpp"
#include "netsel/netgraph.hpp"
#include "netsel/netreg.hpp"
#include "netsel/scones.hpp"
#include "netsel/selectpipe.hpp"

namespace fs = std::filesystem;
using namespace netsel;

namespace {

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

std::string out_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

// ---------------------------------------------------------------------------
// Inputs

struct Dataset {
  std::string name;
  FeatureMatrix x;
  Phenotype y;
  std::optional<WeightedNetwork> network;
};

Dataset load_dataset(std::string name, const std::string& features,
                     const std::string& phenotype, const std::string& network) {
  auto aligned = align(load_feature_matrix(features), load_phenotype(phenotype));
  if (!aligned.dropped_from_features.empty() || !aligned.dropped_from_phenotype.empty()) {
    warn(name + ": dropped " + std::to_string(aligned.dropped_from_features.size()) +
         " feature rows and " + std::to_string(aligned.dropped_from_phenotype.size()) +
         " phenotype rows without a matching sample id");
  }
  Dataset d{std::move(name), std::move(aligned.x), std::move(aligned.y), std::nullopt};
  if (!network.empty()) d.network = load_network(network, d.x.feature_ids());
  return d;
}

/// Every subdirectory of `dir` (sorted by name) holds features.tsv and
/// phenotype.tsv, plus network.tsv unless `dir`/network.tsv is shared.
std::vector<Dataset> load_tasks(const std::string& dir) {
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) subdirs.push_back(entry.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  if (subdirs.empty()) {
    throw Error(ErrorKind::io, "no task subdirectories in '" + dir + "'");
  }
  const fs::path shared = fs::path(dir) / "network.tsv";
  std::vector<Dataset> tasks;
  for (const auto& sub : subdirs) {
    const fs::path own = sub / "network.tsv";
    const fs::path net = fs::exists(own) ? own : shared;
    tasks.push_back(load_dataset(sub.filename().string(), (sub / "features.tsv").string(),
                                 (sub / "phenotype.tsv").string(),
                                 fs::exists(net) ? net.string() : std::string()));
    if (tasks.back().x.feature_ids() != tasks.front().x.feature_ids()) {
      throw Error(ErrorKind::dimension_mismatch,
                  "task '" + tasks.back().name + "' has different feature ids");
    }
  }
  return tasks;
}

RegressionTask as_task(const Dataset& d) { return {d.x.values(), d.y.values()}; }

std::vector<RegressionTask> as_tasks(const std::vector<Dataset>& ds) {
  std::vector<RegressionTask> out;
  for (const auto& d : ds) out.push_back(as_task(d));
  return out;
}

std::vector<WeightedNetwork> networks_of(const std::vector<Dataset>& ds) {
  std::vector<WeightedNetwork> out;
  for (const auto& d : ds) {
    if (!d.network) throw Error(ErrorKind::invalid_argument, d.name + ": a network is required");
    out.push_back(*d.network);
  }
  return out;
}

RegressionTask centered(const RegressionTask& t) {
  RegressionTask c{t.x.rowwise() - t.x.colwise().mean(), t.y.array() - t.y.mean()};
  return c;
}

// ---------------------------------------------------------------------------
// Option bundles

struct DataOptions {
  std::string features, phenotype, network, tasks;
  std::string out = ".";

  void add_single(CLI::App* app, bool network_required) {
    app->add_option("--features", features, "features.tsv (sample_id + feature columns)")
        ->required()->check(CLI::ExistingFile);
    app->add_option("--phenotype", phenotype, "phenotype.tsv (sample_id<TAB>value)")
        ->required()->check(CLI::ExistingFile);
    auto* net = app->add_option("--network", network, "feature network edge list")
                    ->check(CLI::ExistingFile);
    if (network_required) net->required();
    app->add_option("-o,--out", out, "output directory")->capture_default_str();
  }

  void add_either(CLI::App* app) {
    auto* f = app->add_option("--features", features, "features.tsv")->check(CLI::ExistingFile);
    auto* p = app->add_option("--phenotype", phenotype, "phenotype.tsv")->check(CLI::ExistingFile);
    app->add_option("--network", network, "feature network edge list")->check(CLI::ExistingFile);
    auto* t = app->add_option("--tasks", tasks, "directory with one subdirectory per task")
                  ->check(CLI::ExistingDirectory);
    f->needs(p);
    p->needs(f);
    t->excludes(f)->excludes(p);
    app->add_option("-o,--out", out, "output directory")->capture_default_str();
  }

  std::vector<Dataset> load() const {
    if (!tasks.empty()) return load_tasks(tasks);
    if (features.empty()) {
      throw Error(ErrorKind::invalid_argument, "give --features/--phenotype or --tasks");
    }
    std::vector<Dataset> out;
    out.push_back(load_dataset("data", features, phenotype, network));
    return out;
  }
};

struct PenaltyOptions {
  double lambda = 0.0, eta1 = 0.0, eta2 = 0.0, eta = 0.0;
  std::string groups, gene_network;
  SolverConfig cfg;
  bool no_center = false;

  void add(CLI::App* app) {
    app->add_option("--lambda", lambda, "main penalty weight")->capture_default_str();
    app->add_option("--eta1", eta1, "l1 weight (grace, gggl)")->capture_default_str();
    app->add_option("--eta2", eta2, "smoothness weight (grace, gggl)")->capture_default_str();
    app->add_option("--eta", eta, "l1 weight inside the fused penalty (gfl)")
        ->capture_default_str();
    app->add_option("--groups", groups, "groups.tsv (group_id<TAB>feature_id)")
        ->check(CLI::ExistingFile);
    app->add_option("--gene-network", gene_network, "edge list over group ids (gggl)")
        ->check(CLI::ExistingFile);
    app->add_option("--tol", cfg.tol, "relative objective tolerance")->capture_default_str();
    app->add_option("--max-iters", cfg.max_iters, "iteration cap")->capture_default_str();
    app->add_flag("--no-center", no_center, "fit on raw data instead of centered data");
  }

  PenaltySpec spec(PenaltyKind kind, const Dataset& d) const {
    PenaltySpec s;
    s.kind = kind;
    s.lambda = lambda;
    s.eta1 = eta1;
    s.eta2 = eta2;
    s.eta = eta;
    if (kind == PenaltyKind::grace || kind == PenaltyKind::gfl) s.network = d.network;
    if (kind == PenaltyKind::ogl || kind == PenaltyKind::gggl) {
      if (groups.empty()) throw Error(ErrorKind::invalid_argument, "--groups is required");
      auto named = load_groups(groups, d.x.feature_ids());
      std::vector<bool> covered(d.x.m(), false);
      for (const auto& g : named.groups) {
        for (const Index p : g) covered[p] = true;
      }
      const auto uncovered = std::count(covered.begin(), covered.end(), false);
      if (uncovered > 0) {
        warn(std::to_string(uncovered) +
             " features are in no group and are treated as singleton groups");
      }
      if (kind == PenaltyKind::gggl) {
        if (gene_network.empty()) {
          throw Error(ErrorKind::invalid_argument, "--gene-network is required");
        }
        s.gene_network = load_network(gene_network, named.group_ids);
      }
      s.groups = std::move(named.groups);
    }
    return s;
  }

  std::map<std::string, double> params(PenaltyKind kind) const {
    switch (kind) {
      case PenaltyKind::grace: return {{"eta1", eta1}, {"eta2", eta2}};
      case PenaltyKind::gfl: return {{"lambda", lambda}, {"eta", eta}};
      case PenaltyKind::gggl:
        return {{"lambda", lambda}, {"eta1", eta1}, {"eta2", eta2}};
      default: return {{"lambda", lambda}};
    }
  }
};

// ---------------------------------------------------------------------------
// Commands

void run_build_network(const std::string& positions, const std::string& genes,
                       const std::string& gene_network, const std::string& mode,
                       long long window, const std::string& out) {
  const auto pos = load_positions(positions);
  const auto intervals = load_genes(genes);
  std::vector<std::string> gene_ids;
  for (const auto& g : intervals) gene_ids.push_back(g.gene_id);
  const auto gene_net = gene_network.empty() ? WeightedNetwork(gene_ids, {})
                                             : load_network(gene_network, gene_ids);
  const auto g = build_feature_network(pos, intervals, gene_net, window,
                                       parse_network_mode(mode));
  write_network(g, out);
  std::cout << "wrote " << g.edges().size() << " edges over " << g.node_count()
            << " features to " << out << '\n';
}

void run_gene_pvals(const std::string& pvals, const std::string& mapping,
                    const std::string& method, const std::string& out) {
  const auto scores = summarize_gene_pvalues(load_pvalues(pvals), load_mapping(mapping),
                                             parse_summary_method(method));
  if (!scores.omitted.empty()) {
    warn(std::to_string(scores.omitted.size()) + " genes have no scored feature and are omitted");
  }
  write_gene_scores(scores, out);
  std::cout << "wrote " << scores.gene_ids.size() << " gene scores to " << out << '\n';
}

void run_modules(const std::string& scores_path, const std::string& network,
                 const ModuleSearchParams& params, const std::string& out) {
  const auto scores = load_gene_scores(scores_path);
  const auto g = load_network(network, scores.gene_ids);
  const auto modules = greedy_module_search(g, scores, params);
  write_modules(modules, g, out);
  std::cout << "wrote " << modules.size() << " modules to " << out << '\n';
}

void write_selection(Report report, const std::string& dir, double runtime_ms) {
  report.runtime_ms = runtime_ms;
  write_report(report, out_path(dir, "report.json"), out_path(dir, "selected_ids.txt"));
  std::cout << report.method << ": selected " << report.selected_ids.size()
            << " features; report in " << out_path(dir, "report.json") << '\n';
}

void run_scones(const DataOptions& data, const SconesParams& params, bool normalize) {
  const Stopwatch clock;
  const auto d = data.load().front();
  const auto c = skat_linear_score(d.x.values(), d.y.values(), normalize);
  const auto s = scones_select(c, params, *d.network);
  write_selection(make_report("scones", s, d.x.feature_ids()), data.out, clock.ms());
}

void run_multi_scones(const DataOptions& data, const SconesParams& params, bool normalize) {
  const Stopwatch clock;
  const auto tasks = data.load();
  std::vector<RelevanceVector> c;
  for (const auto& t : tasks) c.push_back(skat_linear_score(t.x.values(), t.y.values(), normalize));
  const auto sol = multi_scones_select(c, params, networks_of(tasks));
  const auto& ids = tasks.front().x.feature_ids();

  Report r;
  r.method = "multi-scones";
  r.params = {{"eta", params.eta}, {"lambda", params.lambda}, {"mu", params.mu}};
  r.objective = sol.objective_value;
  std::set<Index> any;
  r.extra["tasks"] = nlohmann::json::array();
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& sel = sol.tasks[t].selected;
    any.insert(sel.begin(), sel.end());
    r.extra["tasks"].push_back({{"name", tasks[t].name},
                                {"selected_ids", ids_of(sel, ids)},
                                {"objective", sol.tasks[t].objective_value}});
  }
  r.selected_ids = ids_of(std::vector<Index>(any.begin(), any.end()), ids);
  write_selection(std::move(r), data.out, clock.ms());
}

std::vector<double> path_values(const std::string& text, double top) {
  std::size_t used = 0;
  try {
    const long count = std::stol(text, &used);
    if (used == text.size()) {
      if (count < 1) throw Error(ErrorKind::invalid_argument, "path length must be >= 1");
      return log_path(top, static_cast<std::size_t>(count));
    }
  } catch (const std::logic_error&) {
  }
  auto values = parse_grid_values(text);
  std::reverse(values.begin(), values.end());
  return values;
}

void write_path(const PathResult& path, const std::vector<std::string>& ids,
                const std::string& file) {
  auto out = netsel::detail::open_output(file);
  out << "feature_id";
  for (const double v : path.values) out << '\t' << netsel::detail::format_double(v);
  out << '\n';
  for (std::size_t p = 0; p < ids.size(); ++p) {
    out << ids[p];
    for (const auto& f : path.fits) {
      out << '\t' << netsel::detail::format_double(f.beta[static_cast<Index>(p)]);
    }
    out << '\n';
  }
}

void run_regression(PenaltyKind kind, const DataOptions& data, const PenaltyOptions& opts,
                    const std::string& lambda_path, unsigned threads) {
  const Stopwatch clock;
  const auto tasks = data.load();
  const auto& ids = tasks.front().x.feature_ids();
  const auto prepare = [&](const Dataset& d) {
    return opts.no_center ? as_task(d) : centered(as_task(d));
  };
  auto params = opts.params(kind);
  params["centered"] = opts.no_center ? 0.0 : 1.0;

  if (kind == PenaltyKind::mtlasso) {
    if (!lambda_path.empty()) {
      throw Error(ErrorKind::invalid_argument, "--lambda-path is not supported for mtlasso");
    }
    std::vector<RegressionTask> prepared;
    for (const auto& t : tasks) prepared.push_back(prepare(t));
    const auto fits = fit_mtlasso(prepared, opts.lambda, opts.cfg);
    Vector row_norm = Vector::Zero(static_cast<Index>(ids.size()));
    Report r = make_report("mtlasso", fits.front(), ids, params);
    r.extra["tasks"] = nlohmann::json::array();
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      row_norm += fits[t].beta.cwiseAbs2();
      write_beta(fits[t].beta, ids, out_path(data.out, "beta_" + tasks[t].name + ".tsv"));
      r.extra["tasks"].push_back({{"name", tasks[t].name},
                                  {"selected_ids", ids_of(support(fits[t].beta), ids)}});
    }
    r.selected_ids = ids_of(support(row_norm), ids);
    write_selection(std::move(r), data.out, clock.ms());
    return;
  }

  if (tasks.size() != 1) {
    throw Error(ErrorKind::invalid_argument, "--tasks is only used by mtlasso");
  }
  const auto task = prepare(tasks.front());
  const auto spec = opts.spec(kind, tasks.front());
  const std::string name = to_string(kind);

  if (lambda_path.empty()) {
    const auto fit_result = fit(task.x, task.y, spec, opts.cfg);
    if (!fit_result.converged) warn(name + " stopped before converging");
    write_beta(fit_result.beta, ids, out_path(data.out, "beta.tsv"));
    write_selection(make_report(name, fit_result, ids, params), data.out, clock.ms());
    return;
  }

  const auto values = path_values(lambda_path, lambda_max(task.x, task.y, spec));
  const auto path = fit_path(task.x, task.y, spec, values, opts.cfg, threads);
  write_path(path, ids, out_path(data.out, "beta_path.tsv"));
  const auto& last = path.fits.back();
  write_beta(last.beta, ids, out_path(data.out, "beta.tsv"));
  const std::string varied = kind == PenaltyKind::grace ? "eta1" : "lambda";
  params[varied] = values.back();
  Report r = make_report(name, last, ids, params);
  r.extra["path"] = nlohmann::json::array();
  for (std::size_t k = 0; k < values.size(); ++k) {
    r.extra["path"].push_back({{varied, values[k]},
                               {"objective", path.fits[k].objective_value},
                               {"converged", path.fits[k].converged},
                               {"n_selected", support(path.fits[k].beta).size()}});
    r.converged = r.converged && path.fits[k].converged;
  }
  write_selection(std::move(r), data.out, clock.ms());
}

struct GridOptions {
  std::map<std::string, std::string> axes;  // name -> grid text

  void add(CLI::App* app, const std::string& name, const std::string& help) {
    app->add_option("--grid-" + name, axes[name], help);
  }

  void apply(GridSpec& grid) const {
    for (const auto& [name, text] : axes) {
      if (text.empty()) continue;
      auto values = parse_grid_values(text);
      const auto it = std::find_if(grid.axes.begin(), grid.axes.end(),
                                   [&](const auto& a) { return a.first == name; });
      if (it != grid.axes.end()) {
        it->second = std::move(values);
      } else {
        grid.add(name, std::move(values));
      }
    }
  }
};

void run_cv(const std::string& method, const DataOptions& data, const PenaltyOptions& popts,
            const GridOptions& gopts, const CvOptions& cv, bool normalize) {
  const Stopwatch clock;
  const auto datasets = data.load();
  const auto tasks = as_tasks(datasets);
  const auto& ids = datasets.front().x.feature_ids();

  Selector select;
  GridSpec grid;
  if (method == "scones" || method == "multi-scones") {
    if (method == "scones" && tasks.size() != 1) {
      throw Error(ErrorKind::invalid_argument, "scones takes one task; use multi-scones");
    }
    select = scones_selector(networks_of(datasets), normalize);
    grid = default_scones_grid(tasks, normalize);
  } else {
    const auto kind = parse_penalty_kind(method);
    if (kind != PenaltyKind::mtlasso && tasks.size() != 1) {
      throw Error(ErrorKind::invalid_argument, method + " takes one task");
    }
    const auto spec = popts.spec(kind, datasets.front());
    select = regression_selector(spec, popts.cfg);
    grid = default_regression_grid(tasks, spec);
  }
  gopts.apply(grid);

  const auto result = cv_grid_search(tasks, select, grid, cv);
  const auto& best = result.best();
  Report r;
  r.method = "cv-" + method;
  r.params = {best.params.begin(), best.params.end()};
  r.objective = best.score;
  std::set<Index> any;
  for (const auto& s : result.final_selection) any.insert(s.begin(), s.end());
  r.selected_ids = ids_of(std::vector<Index>(any.begin(), any.end()), ids);
  r.extra["cv"] = result.to_json();
  if (tasks.size() > 1) {
    r.extra["tasks"] = nlohmann::json::array();
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      r.extra["tasks"].push_back({{"name", datasets[t].name},
                                  {"selected_ids", ids_of(result.final_selection[t], ids)}});
    }
  }
  std::cout << "chosen:";
  for (const auto& [k, v] : best.params) std::cout << ' ' << k << '=' << v;
  std::cout << " (stability " << best.stability.jaccard << ", predictivity "
            << best.predictivity << ")\n";
  write_selection(std::move(r), data.out, clock.ms());
}

void run_synth(Index n, Index m, Index k, double effect, const std::string& graph,
               std::uint64_t seed, const std::string& dir) {
  const auto d = generate_synthetic(n, m, k, effect, parse_graph_kind(graph), seed);
  write_feature_matrix(d.x, out_path(dir, "features.tsv"));
  write_phenotype(d.y, out_path(dir, "phenotype.tsv"));
  write_network(d.network, out_path(dir, "network.tsv"));
  auto planted = netsel::detail::open_output(out_path(dir, "planted.txt"));
  for (const auto& id : ids_of(d.planted, d.x.feature_ids())) planted << id << '\n';
  std::cout << "wrote " << n << " x " << m << " data, " << d.network.edges().size()
            << " edges and " << k << " planted features to " << dir << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network-guided feature selection"};
  app.require_subcommand(1);
  std::function<void()> action;

  // build-network
  std::string positions, genes, gene_network, mode = "gene", net_out = "network.tsv";
  long long window = kDefaultWindow;
  auto* build = app.add_subcommand("build-network", "feature network from genomic positions");
  build->add_option("--positions", positions, "feature_id<TAB>chrom<TAB>pos")
      ->required()->check(CLI::ExistingFile);
  build->add_option("--genes", genes, "gene_id<TAB>chrom<TAB>start<TAB>end")
      ->required()->check(CLI::ExistingFile);
  build->add_option("--gene-network", gene_network, "gene edge list (interaction mode)")
      ->check(CLI::ExistingFile);
  build->add_option("--mode", mode, "sequence, gene or interaction")
      ->check(CLI::IsMember({"sequence", "gene", "interaction"}))->capture_default_str();
  build->add_option("--window", window, "bases added on each side of a gene")
      ->capture_default_str();
  build->add_option("-o,--out", net_out, "output edge list")->capture_default_str();
  build->callback([&] {
    action = [&] { run_build_network(positions, genes, gene_network, mode, window, net_out); };
  });

  // gene-pvals
  std::string pvals, mapping, summary = "min", scores_out = "gene_scores.tsv";
  auto* gp = app.add_subcommand("gene-pvals", "summarize SNP p-values per gene");
  gp->add_option("--pvals", pvals, "feature_id<TAB>p")->required()->check(CLI::ExistingFile);
  gp->add_option("--mapping", mapping, "feature_id<TAB>gene_id")
      ->required()->check(CLI::ExistingFile);
  gp->add_option("--method", summary, "min, max or mean")
      ->check(CLI::IsMember({"min", "max", "mean"}))->capture_default_str();
  gp->add_option("-o,--out", scores_out, "output gene scores")->capture_default_str();
  gp->callback([&] { action = [&] { run_gene_pvals(pvals, mapping, summary, scores_out); }; });

  // modules
  std::string scores_in, gene_net_in, modules_out = "modules.tsv";
  ModuleSearchParams module_params;
  auto* mod = app.add_subcommand("modules", "greedy dense-module search");
  mod->add_option("--scores", scores_in, "gene_id<TAB>p<TAB>z")
      ->required()->check(CLI::ExistingFile);
  mod->add_option("--network", gene_net_in, "gene edge list")
      ->required()->check(CLI::ExistingFile);
  mod->add_option("--r", module_params.growth, "minimum relative score gain")
      ->capture_default_str();
  mod->add_option("--max-depth", module_params.max_depth, "hops from the seed gene")
      ->capture_default_str();
  mod->add_option("--threads", module_params.threads, "workers (0 = all cores)");
  mod->add_option("-o,--out", modules_out, "output modules")->capture_default_str();
  mod->callback([&] {
    action = [&] { run_modules(scores_in, gene_net_in, module_params, modules_out); };
  });

  // scones / multi-scones
  DataOptions scones_data, multi_data;
  SconesParams scones_params, multi_params;
  bool normalize = false;
  std::string eta_grid, lambda_grid;
  CvOptions scones_cv;
  auto* sc = app.add_subcommand("scones", "graph-cut selection on one phenotype");
  scones_data.add_single(sc, true);
  sc->add_option("--eta", scones_params.eta, "price per selected feature")->capture_default_str();
  sc->add_option("--lambda", scones_params.lambda, "price per unit of cut weight")
      ->capture_default_str();
  sc->add_flag("--normalize", normalize, "use squared correlations as relevance");
  sc->add_option("--eta-grid", eta_grid, "cross-validate eta over a grid");
  sc->add_option("--lambda-grid", lambda_grid, "cross-validate lambda over a grid");
  sc->add_option("--folds", scones_cv.folds, "CV folds")->capture_default_str();
  sc->add_option("--seed", scones_cv.seed, "fold seed")->capture_default_str();
  sc->callback([&] {
    action = [&] {
      if (eta_grid.empty() && lambda_grid.empty()) {
        run_scones(scones_data, scones_params, normalize);
        return;
      }
      GridOptions g;
      const auto fixed = [](double v) { return netsel::detail::format_double(v); };
      g.axes["eta"] = eta_grid.empty() ? fixed(scones_params.eta) : eta_grid;
      g.axes["lambda"] = lambda_grid.empty() ? fixed(scones_params.lambda) : lambda_grid;
      run_cv("scones", scones_data, {}, g, scones_cv, normalize);
    };
  });

  auto* ms = app.add_subcommand("multi-scones", "graph-cut selection across tasks");
  ms->add_option("--tasks", multi_data.tasks, "directory with one subdirectory per task")
      ->required()->check(CLI::ExistingDirectory);
  ms->add_option("--eta", multi_params.eta, "price per selected feature")->capture_default_str();
  ms->add_option("--lambda", multi_params.lambda, "price per unit of cut weight")
      ->capture_default_str();
  ms->add_option("--mu", multi_params.mu, "price per cross-task disagreement")
      ->capture_default_str();
  ms->add_flag("--normalize", normalize, "use squared correlations as relevance");
  ms->add_option("-o,--out", multi_data.out, "output directory")->capture_default_str();
  ms->callback([&] { action = [&] { run_multi_scones(multi_data, multi_params, normalize); }; });

  // penalized regression
  DataOptions reg_data;
  PenaltyOptions reg_opts;
  std::string lambda_path;
  unsigned path_threads = 1;
  for (const auto kind : {PenaltyKind::lasso, PenaltyKind::grace, PenaltyKind::gfl,
                          PenaltyKind::ogl, PenaltyKind::gggl, PenaltyKind::mtlasso}) {
    auto* sub = app.add_subcommand(to_string(kind), std::string(to_string(kind)) +
                                                        " penalized least squares");
    reg_data.add_either(sub);
    reg_opts.add(sub);
    sub->add_option("--lambda-path", lambda_path,
                    "path length from the zero threshold, or explicit values");
    sub->add_option("--threads", path_threads,
                    "parallel cold-started path fits (1 = warm-started sequence)")
        ->capture_default_str();
    sub->callback([&, kind] {
      action = [&, kind] { run_regression(kind, reg_data, reg_opts, lambda_path, path_threads); };
    });
  }

  // cv
  std::string cv_method = "scones";
  DataOptions cv_data;
  PenaltyOptions cv_penalty;
  GridOptions cv_grid;
  CvOptions cv_opts;
  std::string criterion = "product";
  auto* cv = app.add_subcommand("cv", "cross-validated grid search");
  cv->add_option("--method", cv_method, "scones, multi-scones or a regression penalty")
      ->check(CLI::IsMember({"scones", "multi-scones", "lasso", "grace", "gfl", "ogl", "gggl",
                             "mtlasso"}))
      ->capture_default_str();
  cv_data.add_either(cv);
  cv_penalty.add(cv);
  for (const auto* axis : {"eta", "lambda", "mu", "eta1", "eta2"}) {
    cv_grid.add(cv, axis, std::string("values for ") + axis +
                              " (log:low:high:count or a comma list)");
  }
  cv->add_option("--folds", cv_opts.folds, "CV folds")->capture_default_str();
  cv->add_option("--criterion", criterion, "stability, predictivity or product")
      ->check(CLI::IsMember({"stability", "predictivity", "product"}))->capture_default_str();
  cv->add_option("--seed", cv_opts.seed, "fold seed")->capture_default_str();
  cv->add_option("--threads", cv_opts.threads, "workers (0 = all cores)");
  cv->add_flag("--normalize", normalize, "use squared correlations as relevance");
  cv->callback([&] {
    action = [&] {
      cv_opts.criterion = parse_criterion(criterion);
      run_cv(cv_method, cv_data, cv_penalty, cv_grid, cv_opts, normalize);
    };
  });

  // synth
  Index n = 200, m = 2000, k = 20;
  double effect = 0.25;
  std::string graph = "grid", synth_out = ".";
  std::uint64_t synth_seed = 7;
  auto* sy = app.add_subcommand("synth", "planted-module benchmark data");
  sy->add_option("--n", n, "samples")->capture_default_str();
  sy->add_option("--m", m, "features")->capture_default_str();
  sy->add_option("--module-size", k, "planted connected features")->capture_default_str();
  sy->add_option("--effect", effect, "effect per planted feature")->capture_default_str();
  sy->add_option("--graph", graph, "grid or scale-free")
      ->check(CLI::IsMember({"grid", "scale-free"}))->capture_default_str();
  sy->add_option("--seed", synth_seed, "generator seed")->capture_default_str();
  sy->add_option("-o,--out", synth_out, "output directory")->capture_default_str();
  sy->callback([&] {
    action = [&] { run_synth(n, m, k, effect, graph, synth_seed, synth_out); };
  });

  CLI11_PARSE(app, argc, argv);
  try {
    action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
