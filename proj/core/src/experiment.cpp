#include "pcgraph/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "pcgraph/baselines.hpp"
#include "pcgraph/parallel.hpp"

namespace pcgraph {
namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

template <typename Get>
MeanSe summarize(const std::vector<std::vector<std::vector<Measurement>>>& all,
                 std::size_t method, std::size_t k, Get get) {
  const auto reps = static_cast<double>(all.size());
  double sum = 0.0;
  for (const auto& rep : all) sum += get(rep[method][k]);
  MeanSe out;
  out.mean = sum / reps;
  if (all.size() > 1) {
    double ss = 0.0;
    for (const auto& rep : all) {
      const double d = get(rep[method][k]) - out.mean;
      ss += d * d;
    }
    out.se = std::sqrt(ss / (reps - 1.0) / reps);
  }
  return out;
}

Index source_nodes(const ExperimentSource& source) {
  if (const auto* synth = std::get_if<SyntheticSource>(&source)) {
    return synth->graph.nodes();
  }
  return std::get<DatasetSource>(source).data.nodes();
}

Index source_rows(const ExperimentSource& source) {
  if (const auto* synth = std::get_if<SyntheticSource>(&source)) {
    return synth->samples;
  }
  return std::get<DatasetSource>(source).data.samples_count();
}

}  // namespace

const ReportRow& EvalReport::row(const std::string& method, Index n) const {
  for (const auto& r : rows) {
    if (r.method == method && r.n == n) return r;
  }
  throw Error(ErrorCode::InvalidArgument,
              "report has no row for method '" + method + "' at N=" + std::to_string(n));
}

void ExperimentConfig::validate() const {
  if (methods.empty()) {
    throw Error(ErrorCode::InvalidArgument, "experiment needs at least one method");
  }
  std::set<std::string> names;
  for (const auto& m : methods) {
    if (!names.insert(m.name).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate method name '" + m.name + "'");
    }
    if (m.kind == MethodKind::Reference && !m.graph) {
      throw Error(ErrorCode::InvalidArgument,
                  "reference method '" + m.name + "' has no graph");
    }
  }
  if (n_grid.empty()) {
    throw Error(ErrorCode::InvalidArgument, "N grid is empty");
  }
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    if (n_grid[k] < 1 || (k > 0 && n_grid[k] <= n_grid[k - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "N grid must be positive and strictly increasing");
    }
  }
  if (repetitions < 1) {
    throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
  }
  for (double f : fractions) {
    if (!(f > 0.0 && f < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "split fractions must lie in (0, 1)");
    }
  }
  if (std::abs(fractions[0] + fractions[1] - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "split fractions must sum to 1");
  }
  if (!split) {
    throw Error(ErrorCode::InvalidArgument, "experiment has no node split");
  }
  solver.validate();
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t rep,
                          std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(rep),
                    static_cast<std::uint32_t>(rep >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

SyntheticModel build_synthetic_model(const CommunitySpec& spec) {
  auto generator = make_community_graph(spec);
  auto noise = make_noise(spec);
  Matrix covariance = population_covariance(generator, noise);
  auto truth = weights_from_precision(covariance);
  return SyntheticModel{std::move(generator), std::move(noise),
                        std::move(covariance), std::move(truth)};
}

EvalReport run_experiment(const ExperimentConfig& cfg,
                          const ExperimentSource& source) {
  cfg.validate();
  const Index p = source_nodes(source);
  const NodeSplit& split = *cfg.split;
  if (split.nodes() != p) {
    throw Error(ErrorCode::DimensionMismatch,
                "split is defined for " + std::to_string(split.nodes()) +
                    " nodes but the data has " + std::to_string(p));
  }
  const auto train_rows = static_cast<Index>(
      std::llround(cfg.fractions[0] * static_cast<double>(source_rows(source))));
  if (cfg.n_grid.back() > train_rows) {
    throw Error(ErrorCode::InvalidArgument,
                "largest N=" + std::to_string(cfg.n_grid.back()) +
                    " exceeds the " + std::to_string(train_rows) + " training rows");
  }

  std::optional<SyntheticModel> model;
  std::optional<WeightedGraph> truth;
  if (const auto* synth = std::get_if<SyntheticSource>(&source)) {
    model = build_synthetic_model(synth->graph);
    truth = model->truth;
  } else {
    truth = std::get<DatasetSource>(source).truth;
  }
  if (truth && truth->nodes() != p) {
    throw Error(ErrorCode::DimensionMismatch, "true graph size does not match the data");
  }

  // Fixed graphs per method (reference and truth).
  std::vector<std::optional<WeightedGraph>> fixed(cfg.methods.size());
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    const auto& spec = cfg.methods[m];
    if (spec.kind == MethodKind::Reference || spec.kind == MethodKind::Truth) {
      fixed[m] = spec.graph ? spec.graph : truth;
      if (!fixed[m]) {
        throw Error(ErrorCode::InvalidArgument,
                    "method '" + spec.name + "' needs a true graph but none is available");
      }
      if (fixed[m]->nodes() != p) {
        throw Error(ErrorCode::DimensionMismatch,
                    "graph of method '" + spec.name + "' does not match the data size");
      }
    }
  }
  const bool has_truth = truth && truth->weights().squaredNorm() > 0.0;

  const auto reps = static_cast<std::size_t>(cfg.repetitions);
  const std::size_t methods = cfg.methods.size();
  const std::size_t grid = cfg.n_grid.size();
  EvalReport report;
  report.measurements.assign(
      reps, std::vector<std::vector<Measurement>>(methods, std::vector<Measurement>(grid)));

  const auto all = Eigen::all;
  parallel_for(static_cast<std::ptrdiff_t>(reps), resolve_threads(cfg.threads),
               [&](std::ptrdiff_t r) {
    const auto rep = static_cast<std::uint64_t>(r);
    const Dataset full =
        model ? generate_synthetic(model->generator, model->noise,
                                   std::get<SyntheticSource>(source).samples,
                                   derive_seed(cfg.seed, rep, 0))
              : std::get<DatasetSource>(source).data;
    const auto [train, test] =
        center_split(full, cfg.fractions, derive_seed(cfg.seed, rep, 1), cfg.center_mode);
    const Matrix test_observed = test.samples()(all, split.observed());
    const Matrix test_targets = test.samples()(all, split.targets());

    auto& out = report.measurements[static_cast<std::size_t>(r)];
    for (std::size_t m = 0; m < methods; ++m) {
      for (std::size_t k = 0; k < grid; ++k) {
        const auto start = std::chrono::steady_clock::now();
        std::optional<WeightedGraph> learned;
        switch (cfg.methods[m].kind) {
          case MethodKind::Spice:
            learned = spice_learn(SuffStats::from_dataset(train.head(cfg.n_grid[k])),
                                  cfg.solver, 1)
                          .graph;
            break;
          case MethodKind::Ls:
            learned = ls_learn(SuffStats::from_dataset(train.head(cfg.n_grid[k]))).graph;
            break;
          case MethodKind::Reference:
          case MethodKind::Truth:
            learned = fixed[m];
            break;
        }
        const auto stop = std::chrono::steady_clock::now();

        Measurement& meas = out[m][k];
        meas.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        meas.npe = npe(predict(*learned, test_observed, split), test_targets).linear;
        meas.nnz = static_cast<double>(learned->edge_count());
        if (has_truth) {
          meas.nmse_raw = frobenius_error(*truth, *learned);
          meas.nmse = nmse_graph(*truth, *learned);
          meas.recovery = support_recovery(*truth, *learned);
        } else {
          meas.nmse_raw = meas.nmse = meas.recovery =
              std::numeric_limits<double>::quiet_NaN();
        }
      }
    }
  });

  for (std::size_t m = 0; m < methods; ++m) {
    for (std::size_t k = 0; k < grid; ++k) {
      const auto& all_reps = report.measurements;
      ReportRow row;
      row.method = cfg.methods[m].name;
      row.n = cfg.n_grid[k];
      const auto npe_stats = summarize(all_reps, m, k, [](const Measurement& x) { return x.npe; });
      const auto nmse_stats = summarize(all_reps, m, k, [](const Measurement& x) { return x.nmse; });
      row.npe = npe_stats.mean;
      row.npe_se = npe_stats.se;
      row.npe_db = to_db(row.npe);
      row.nmse = nmse_stats.mean;
      row.nmse_se = nmse_stats.se;
      row.nmse_raw = summarize(all_reps, m, k, [](const Measurement& x) { return x.nmse_raw; }).mean;
      row.recovery = summarize(all_reps, m, k, [](const Measurement& x) { return x.recovery; }).mean;
      row.nnz = summarize(all_reps, m, k, [](const Measurement& x) { return x.nnz; }).mean;
      row.wall_ms = summarize(all_reps, m, k, [](const Measurement& x) { return x.wall_ms; }).mean;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace pcgraph
