#include "cometh/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "cometh/checkpoint.hpp"
#include "cometh/dataset_io.hpp"
#include "cometh/generators.hpp"
#include "cometh/metrics.hpp"
#include "cometh/sampling.hpp"
#include "cometh/toy_posterior.hpp"
#include "cometh/training.hpp"

namespace cometh {
namespace {

namespace fs = std::filesystem;

NoiseSchedule schedule_from_config(const Config& cfg) {
  NoiseSchedule schedule;
  schedule.family =
      schedule_family_from_string(cfg.get_str("schedule.family", "cosine"));
  schedule.alpha = cfg.get_real("schedule.alpha", 5.0);
  schedule.t_min = cfg.get_real("schedule.t_min", 0.01);
  schedule.validate();
  return schedule;
}

DenoiserConfig denoiser_config_from(const Config& cfg, int a, int b,
                                    std::uint64_t seed) {
  DenoiserConfig dc;
  dc.hidden_dim = cfg.get_int("denoiser.hidden_dim", 64);
  dc.n_layers = cfg.get_int("denoiser.n_layers", 4);
  dc.n_heads = cfg.get_int("denoiser.n_heads", 4);
  dc.rrwp_K = cfg.get_int("denoiser.rrwp_K", 10);
  dc.global_dim = cfg.get_int("denoiser.global_dim", 16);
  dc.conditioner_dim = cfg.get_int("denoiser.conditioner_dim", 0);
  dc.a = a;
  dc.b = b;
  dc.seed = seed;
  dc.validate();
  return dc;
}

SampleRunConfig sample_config_from(const Config& cfg, std::uint64_t seed) {
  SampleRunConfig sc;
  sc.t_min = cfg.get_real("schedule.t_min", 0.01);
  if (cfg.has("sample.steps")) {
    const int steps = cfg.get_int("sample.steps", 100);
    if (steps < 1) throw ConfigError("sample.steps must be >= 1");
    sc.tau = (1.0 - sc.t_min) / static_cast<Real>(steps);
  } else {
    sc.tau = cfg.get_real("sample.tau", 0.002);
  }
  sc.corrector_steps = cfg.get_int("sample.corrector_steps", 0);
  sc.tau_c = cfg.get_real("sample.tau_c", 0.7);
  sc.corrector_window = cfg.get_real("sample.corrector_window", 0.1);
  sc.guidance_s = cfg.get_real("sample.s", 0.0);
  sc.seed = seed;
  sc.validate();
  return sc;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw DataError("cannot create output directory " + dir);
}

// Conditioner registry: maps a clean graph to its conditioning vector.
std::function<Vector(const AttributedGraph&)> conditioner_from(
    const Config& cfg) {
  const std::string kind = cfg.get_str("train.conditioner", "none");
  if (kind == "none") return nullptr;
  if (kind == "triangle_count") {
    return [](const AttributedGraph& g) {
      Vector y(1);
      y[0] = static_cast<Real>(triangle_count(g)) / 10.0;
      return y;
    };
  }
  throw ConfigError("unknown conditioner '" + kind + "'");
}

ValidityFn validity_from(const Config& cfg, const std::string& key) {
  const std::string kind = cfg.get_str(key, "planar");
  if (kind == "planar") return validity_planar;
  if (kind == "none") return [](const AttributedGraph&) { return true; };
  throw ConfigError("unknown validity kind '" + kind + "'");
}

std::vector<AttributedGraph> sample_many(const ProbFn& probs_fn,
                                         const DatasetStats& stats,
                                         const NoiseSchedule& schedule,
                                         const SampleRunConfig& sc, int count,
                                         int workers, long* clamp_total) {
  std::vector<AttributedGraph> samples(count);
  std::vector<long> clamps(count, 0);
  const Rng base(sc.seed);
  auto run_range = [&](int begin, int stride) {
    for (int i = begin; i < count; i += stride) {
      Rng rng = base.child(i);
      SampleResult r = sample_graph_with(probs_fn, stats, schedule, sc, rng);
      samples[i] = std::move(r.graph);
      clamps[i] = r.clamp_events;
    }
  };
  if (workers <= 1) {
    run_range(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(run_range, w, workers);
    for (auto& th : pool) th.join();
  }
  if (clamp_total) {
    *clamp_total = 0;
    for (long c : clamps) *clamp_total += c;
  }
  return samples;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw DataError("write to " + path + " failed");
}

}  // namespace

void cmd_generate_data(const Config& cfg) {
  const std::string out_dir = cfg.require_str("data.out");
  const std::string kind = cfg.get_str("data.kind", "planar");
  const std::uint64_t seed = cfg.require_u64("data.seed");
  const int train_count = cfg.get_int("data.train_count", 200);
  const int val_count = cfg.get_int("data.val_count", 40);
  const int test_count = cfg.get_int("data.test_count", 40);
  ensure_out_dir(out_dir);

  auto make_split = [&](const std::string& split, int count,
                        std::uint64_t split_seed) {
    GraphDataset ds;
    ds.split = split;
    if (kind == "planar") {
      const int n_min = cfg.get_int("data.n_min", 12);
      const int n_max = cfg.get_int("data.n_max", 16);
      if (n_min < 3 || n_max < n_min)
        throw ConfigError("invalid planar size range");
      ds.a = 1;
      ds.b = 2;
      Rng rng(split_seed);
      for (int i = 0; i < count; ++i) {
        const int n = n_min + rng.uniform_int(n_max - n_min + 1);
        merge_datasets(ds, generate_planar(1, n, rng.next_u64()));
      }
    } else if (kind == "sbm") {
      const std::vector<int> blocks = cfg.get_int_list("data.blocks", {6, 6});
      const Real p_in = cfg.get_real("data.p_in", 0.8);
      const Real p_out = cfg.get_real("data.p_out", 0.05);
      ds = generate_sbm(count, blocks, p_in, p_out, split_seed);
      ds.split = split;
    } else {
      throw ConfigError("unknown dataset kind '" + kind + "'");
    }
    serialize_dataset(ds, out_dir + "/" + split + ".graphs");
    return ds;
  };

  const Rng master(seed);
  make_split("train", train_count, master.child(1).seed());
  make_split("val", val_count, master.child(2).seed());
  make_split("test", test_count, master.child(3).seed());
  write_text(out_dir + "/generate.config", cfg.dump());
}

void cmd_train(const Config& cfg) {
  const std::string out_dir = cfg.require_str("train.out");
  const std::string data_dir = cfg.require_str("train.data");
  const std::uint64_t seed = cfg.require_u64("train.seed");
  ensure_out_dir(out_dir);

  const GraphDataset train = deserialize_dataset(data_dir + "/train.graphs");
  const GraphDataset val = deserialize_dataset(data_dir + "/val.graphs");
  const NoiseSchedule schedule = schedule_from_config(cfg);
  const MarginalPair marginals = compute_marginals(train);

  auto conditioner_fn = conditioner_from(cfg);
  DenoiserConfig model_cfg = denoiser_config_from(cfg, train.a, train.b, seed);
  if (conditioner_fn && model_cfg.conditioner_dim == 0)
    model_cfg.conditioner_dim = 1;

  TrainConfig tc;
  tc.lambda_edge = cfg.get_real("train.lambda_edge", 5.0);
  tc.learning_rate = cfg.get_real("train.lr", 3e-4);
  tc.batch_size = cfg.get_int("train.batch_size", 8);
  tc.epochs = cfg.get_int("train.epochs", 50);
  tc.p_uncond = cfg.get_real("train.p_uncond", 0.1);
  tc.checkpoint_every = cfg.get_int("train.checkpoint_every", 200);
  tc.validate_every = cfg.get_int("train.validate_every", 100);
  tc.n_threads = cfg.get_int("train.threads", 1);
  tc.seed = seed;
  tc.validate();

  std::optional<Checkpoint> resume;
  if (cfg.has("train.resume")) {
    resume = load_checkpoint(cfg.require_str("train.resume"));
    if (!resume->has_optimizer_state())
      throw DataError("resume checkpoint lacks optimizer state");
  }

  // train.log carries exactly one "step loss lr time_ms" line per step;
  // validation losses go to val.log.
  std::ofstream log(out_dir + "/train.log");
  std::ofstream val_log(out_dir + "/val.log");
  if (!log || !val_log) throw DataError("cannot open training logs");
  run_training(model_cfg, tc, train, val, schedule, marginals, conditioner_fn,
               [&log, &val_log](const std::string& line) {
                 if (line.rfind("val ", 0) == 0)
                   val_log << line << "\n";
                 else
                   log << line << "\n";
               },
               out_dir, resume);
  write_text(out_dir + "/train.config", cfg.dump());
}

void cmd_sample(const Config& cfg) {
  const std::string out_dir = cfg.require_str("sample.out");
  const std::string ckpt_path = cfg.require_str("sample.checkpoint");
  const std::string data_path = cfg.require_str("sample.data");
  const std::uint64_t seed = cfg.require_u64("sample.seed");
  const int count = cfg.get_int("sample.count", 100);
  const int workers = cfg.get_int("sample.workers", 1);
  ensure_out_dir(out_dir);

  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const GraphDataset train = deserialize_dataset(data_path);
  const DatasetStats stats = DatasetStats::from_dataset(train);
  const NoiseSchedule schedule = schedule_from_config(cfg);
  SampleRunConfig sc = sample_config_from(cfg, seed);

  std::optional<Vector> y;
  if (cfg.has("sample.conditioner_value")) {
    Vector v(1);
    v[0] = cfg.get_real("sample.conditioner_value", 0.0);
    y = v;
  }

  const auto t0 = std::chrono::steady_clock::now();
  long clamp_total = 0;
  const ProbFn probs_fn = make_denoiser_prob_fn(ckpt.params, y, sc.guidance_s);
  std::vector<AttributedGraph> samples = sample_many(
      probs_fn, stats, schedule, sc, count, workers, &clamp_total);
  const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();

  GraphDataset out_ds;
  out_ds.a = stats.a;
  out_ds.b = stats.b;
  out_ds.split = "samples";
  out_ds.graphs = std::move(samples);
  serialize_dataset(out_ds, out_dir + "/samples.graphs");

  nlohmann::json manifest;
  manifest["config"] = cfg.values();
  manifest["seed"] = seed;
  manifest["count"] = count;
  manifest["tau"] = sc.tau;
  manifest["corrector_steps"] = sc.corrector_steps;
  manifest["tau_c"] = sc.tau_c;
  manifest["corrector_window"] = sc.corrector_window;
  manifest["guidance_s"] = sc.guidance_s;
  manifest["clamp_events"] = clamp_total;
  manifest["wall_ms"] = wall_ms;
  write_text(out_dir + "/manifest.json", manifest.dump(2));
}

void cmd_eval(const Config& cfg) {
  const std::string out_dir = cfg.require_str("eval.out");
  const std::string generated_path = cfg.require_str("eval.generated");
  const std::string reference_path = cfg.require_str("eval.reference");
  const std::string train_path =
      cfg.get_str("eval.train", cfg.require_str("eval.reference"));
  ensure_out_dir(out_dir);

  const GraphDataset generated = deserialize_dataset(generated_path);
  const GraphDataset reference = deserialize_dataset(reference_path);
  const GraphDataset train = deserialize_dataset(train_path);

  MetricReport report =
      vun_report(generated.graphs, train.graphs, validity_from(cfg, "eval.validity"));
  const Real bw = cfg.get_real("eval.mmd_bandwidth", 1.0);
  report.degree_mmd =
      mmd(generated.graphs, reference.graphs, GraphStatistic::kDegree, bw);
  report.cluster_mmd =
      mmd(generated.graphs, reference.graphs, GraphStatistic::kClustering, bw);
  report.orbit_mmd =
      mmd(generated.graphs, reference.graphs, GraphStatistic::kOrbit, bw);
  report.spectrum_mmd =
      mmd(generated.graphs, reference.graphs, GraphStatistic::kSpectrum, bw);
  report.n_reference = static_cast<int>(reference.graphs.size());

  write_text(out_dir + "/report.txt", report.to_text());
  write_text(out_dir + "/report.json", report.to_json());
}

void cmd_ablate_steps(const Config& cfg) {
  const std::string out_dir = cfg.require_str("ablate.out");
  const std::uint64_t seed = cfg.require_u64("ablate.seed");
  const std::vector<int> step_counts =
      cfg.get_int_list("ablate.steps", {10, 50, 100, 500});
  ensure_out_dir(out_dir);

  std::ostringstream table;
  if (cfg.get_bool("ablate.oracle_toy", false)) {
    // Enumerable 3-node toy with the exact posterior as denoiser: report
    // the total-variation distance to the data distribution over
    // isomorphism classes (= edge counts) per step count.
    const int count = cfg.get_int("ablate.count", 10000);
    NoiseSchedule schedule = schedule_from_config(cfg);
    auto support = three_node_toy_support();
    GraphDataset toy;
    toy.a = 1;
    toy.b = 2;
    for (const auto& [g, w] : support) toy.graphs.push_back(g);
    const DatasetStats stats = DatasetStats::from_dataset(toy);
    Vector target = Vector::Zero(4);
    for (const auto& [g, w] : support) target[g.num_edges()] += w;
    const EnumeratedPosterior posterior(support, schedule, stats.marginals);

    table << "steps\ttv\n";
    for (int steps : step_counts) {
      SampleRunConfig sc = sample_config_from(cfg, seed);
      sc.tau = (1.0 - sc.t_min) / static_cast<Real>(steps);
      Vector freq = Vector::Zero(4);
      Rng base(seed ^ static_cast<std::uint64_t>(steps));
      for (int i = 0; i < count; ++i) {
        Rng rng = base.child(i);
        const SampleResult r = sample_graph_with(posterior.as_prob_fn(), stats,
                                                 schedule, sc, rng);
        freq[r.graph.num_edges()] += 1.0;
      }
      freq /= freq.sum();
      const Real tv = 0.5 * (freq - target).cwiseAbs().sum();
      table << steps << "\t" << tv << "\n";
    }
  } else {
    const Checkpoint ckpt = load_checkpoint(cfg.require_str("ablate.checkpoint"));
    const GraphDataset train = deserialize_dataset(cfg.require_str("ablate.data"));
    const GraphDataset reference =
        deserialize_dataset(cfg.require_str("ablate.reference"));
    const DatasetStats stats = DatasetStats::from_dataset(train);
    const NoiseSchedule schedule = schedule_from_config(cfg);
    const int count = cfg.get_int("ablate.count", 50);
    const int workers = cfg.get_int("ablate.workers", 1);
    const ValidityFn validity = validity_from(cfg, "ablate.validity");

    table << "steps\tdegree_mmd\tcluster_mmd\torbit_mmd\tspectrum_mmd\t"
             "validity\tvun\n";
    for (int steps : step_counts) {
      SampleRunConfig sc = sample_config_from(cfg, seed);
      sc.tau = (1.0 - sc.t_min) / static_cast<Real>(steps);
      const ProbFn probs_fn =
          make_denoiser_prob_fn(ckpt.params, std::nullopt, sc.guidance_s);
      const auto samples = sample_many(probs_fn, stats, schedule, sc, count,
                                       workers, nullptr);
      MetricReport r = vun_report(samples, train.graphs, validity);
      r.degree_mmd = mmd(samples, reference.graphs, GraphStatistic::kDegree);
      r.cluster_mmd =
          mmd(samples, reference.graphs, GraphStatistic::kClustering);
      r.orbit_mmd = mmd(samples, reference.graphs, GraphStatistic::kOrbit);
      r.spectrum_mmd =
          mmd(samples, reference.graphs, GraphStatistic::kSpectrum);
      table << steps << "\t" << r.degree_mmd << "\t" << r.cluster_mmd << "\t"
            << r.orbit_mmd << "\t" << r.spectrum_mmd << "\t" << r.validity
            << "\t" << r.vun << "\n";
    }
  }
  write_text(out_dir + "/ablate.tsv", table.str());
}

void cmd_demo_forward(const Config& cfg) {
  const std::string out_dir = cfg.require_str("demo.out");
  const std::string data_path = cfg.require_str("demo.data");
  const std::uint64_t seed = cfg.get_u64("demo.seed", 0);
  const int index = cfg.get_int("demo.graph_index", 0);
  ensure_out_dir(out_dir);

  const GraphDataset ds = deserialize_dataset(data_path);
  if (index < 0 || index >= static_cast<int>(ds.graphs.size()))
    throw DataError("demo.graph_index out of range");
  const AttributedGraph& g0 = ds.graphs[index];
  const NoiseSchedule schedule = schedule_from_config(cfg);
  const MarginalPair marginals = compute_marginals(ds);

  GraphDataset trajectory;
  trajectory.a = ds.a;
  trajectory.b = ds.b;
  trajectory.split = "trajectory";
  std::ostringstream stats;
  stats << "t\ttv_node_labels\ttv_edge_labels\n";
  const Real grid[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
  Rng rng(seed);
  for (const Real t : grid) {
    Rng step_rng = rng.child(static_cast<std::uint64_t>(t * 100.0));
    const AttributedGraph gt = noise_graph(g0, t, schedule, marginals, step_rng);
    trajectory.graphs.push_back(gt);

    Vector fx = Vector::Zero(ds.a);
    for (int i = 0; i < gt.n(); ++i) fx[gt.node_labels[i]] += 1.0;
    fx /= fx.sum();
    Vector fe = Vector::Zero(ds.b);
    for (int i = 0; i < gt.n(); ++i)
      for (int j = i + 1; j < gt.n(); ++j) fe[gt.edge_labels(i, j)] += 1.0;
    fe /= fe.sum();
    stats << t << "\t" << 0.5 * (fx - marginals.m_x).cwiseAbs().sum() << "\t"
          << 0.5 * (fe - marginals.m_e).cwiseAbs().sum() << "\n";
  }
  serialize_dataset(trajectory, out_dir + "/trajectory.graphs");
  write_text(out_dir + "/distances.tsv", stats.str());
}

int run_subcommand(const std::string& name, const Config& config) {
  try {
    if (name == "generate-data")
      cmd_generate_data(config);
    else if (name == "train")
      cmd_train(config);
    else if (name == "sample")
      cmd_sample(config);
    else if (name == "eval")
      cmd_eval(config);
    else if (name == "ablate-steps")
      cmd_ablate_steps(config);
    else if (name == "demo-forward")
      cmd_demo_forward(config);
    else
      throw ConfigError("unknown subcommand '" + name + "'");
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace cometh
