// semloop: loop-closure detection and registration for semantically
// labeled LiDAR scans.
//
// Subcommands:
//   sequence  process a scan directory in id order, record loop closures
//   pair      verify + register one explicit scan pair
//   bench     synthetic benchmark (registration recall, errors, timings)
//   synth     export synthetic scene pairs in the kitti_bin + label layout
//   report    metrics summary + PR table from a record stream and poses
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
// SEMLOOP_THREADS (default 1) bounds the candidate-verification worker count.

#include "semloop/config.hpp"
#include "semloop/pipeline.hpp"
#include "semloop/scan_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

using namespace semloop;

// Config handling shared by all subcommands: optional file, then explicit
// flags on top (flags win over the file).
struct ConfigArgs {
  std::string config_path;
  std::string class_map_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file");
    cmd->add_option("--class-map", class_map_path, "class map file (default: KITTI-style)");
    for (const auto& field : config_to_fields(PipelineConfig{})) {
      const std::string key = field.key;
      cmd->add_option_function<std::string>(
             "--" + key, [this, key](const std::string& v) { overrides[key] = v; },
             "config field (default " + field.value + ")")
          ->group("Config overrides");
    }
  }

  PipelineConfig resolve() const {
    PipelineConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    for (const auto& [key, value] : overrides) {
      config_set_field(config, key, value);
    }
    config.validate();
    return config;
  }

  ClassMap resolve_class_map() const {
    return class_map_path.empty() ? default_class_map() : load_class_map(class_map_path);
  }
};

ScanFormat parse_format(const std::string& name) {
  if (name == "kitti") return ScanFormat::kKittiBin;
  if (name == "xyz") return ScanFormat::kXyzText;
  throw CLI::ValidationError("--format", "expected 'kitti' or 'xyz'");
}

SemanticScan load_labeled_scan(const std::string& scan_path, const std::string& label_path,
                               ScanFormat format, std::int64_t id) {
  SemanticScan scan = load_scan(scan_path, format).scan;
  scan.scan_id = id;
  return attach_labels(std::move(scan), load_labels(label_path));
}

void print_record(std::ostream& out, const LoopRecord& r) {
  out << "query " << r.query_id << " -> candidate " << r.matched_id << ": "
      << (r.accepted ? "ACCEPTED" : "rejected") << " (" << r.reason << ")\n"
      << "  s_graph " << r.s_graph << "  s_background " << r.s_background << "  inliers "
      << r.inliers << "\n";
  if (r.accepted) {
    const Eigen::Matrix<double, 3, 4> m = r.t_refine.matrix34();
    out << "  t_refine:\n";
    for (int row = 0; row < 3; ++row) {
      out << "    " << m(row, 0) << ' ' << m(row, 1) << ' ' << m(row, 2) << ' ' << m(row, 3)
          << "\n";
    }
  }
  out << "  timings_ms: descriptor " << r.ms_descriptor << ", retrieval " << r.ms_retrieval
      << ", verification " << r.ms_verification << ", refinement " << r.ms_refinement << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"loop closing for semantically labeled LiDAR scans"};
  app.require_subcommand(1);

  // --- sequence ---
  auto* seq = app.add_subcommand("sequence", "process a scan directory in id order");
  std::string seq_scans, seq_labels, seq_poses, seq_out;
  seq->add_option("--scans", seq_scans, "directory of .bin scans (numeric stems)")->required();
  seq->add_option("--labels", seq_labels, "directory of .label files")->required();
  seq->add_option("--poses", seq_poses, "poses file: enables the metrics summary");
  seq->add_option("--out", seq_out, "output directory")->required();
  ConfigArgs seq_config;
  seq_config.attach(seq);

  // --- pair ---
  auto* pair = app.add_subcommand("pair", "verify and register one scan pair");
  std::string pair_scan_a, pair_labels_a, pair_scan_b, pair_labels_b, pair_format = "kitti";
  std::string pair_out;
  pair->add_option("--scan-a", pair_scan_a, "query scan")->required();
  pair->add_option("--labels-a", pair_labels_a, "query labels")->required();
  pair->add_option("--scan-b", pair_scan_b, "candidate scan")->required();
  pair->add_option("--labels-b", pair_labels_b, "candidate labels")->required();
  pair->add_option("--format", pair_format, "scan format: kitti | xyz");
  pair->add_option("--out", pair_out, "also append the record to this file");
  ConfigArgs pair_config;
  pair_config.attach(pair);

  // --- bench ---
  auto* bench = app.add_subcommand("bench", "synthetic registration benchmark");
  BenchOptions bench_options;
  std::string bench_out;
  bench->add_option("--trials", bench_options.trials, "number of scene pairs");
  bench->add_option("--max-offset", bench_options.max_offset, "max viewpoint offset, m");
  bench->add_option("--reverse-fraction", bench_options.reverse_fraction,
                    "fraction of pairs with |yaw| > 150 deg");
  bench->add_option("--noise", bench_options.scene.noise_sigma, "per-view point noise sigma, m");
  bench->add_option("--scene-seed", bench_options.scene.seed, "base scene seed");
  bench->add_flag("--disjoint", bench_options.disjoint,
                  "pair unrelated scenes (negative control)");
  bench->add_option("--out", bench_out, "directory for records.txt");
  ConfigArgs bench_config;
  bench_config.attach(bench);

  // --- synth ---
  auto* synth = app.add_subcommand("synth", "export synthetic scene pairs to disk");
  BenchOptions synth_options;
  std::string synth_out;
  synth->add_option("--pairs", synth_options.trials, "number of scene pairs");
  synth->add_option("--max-offset", synth_options.max_offset, "max viewpoint offset, m");
  synth->add_option("--reverse-fraction", synth_options.reverse_fraction,
                    "fraction of pairs with |yaw| > 150 deg");
  synth->add_option("--noise", synth_options.scene.noise_sigma, "per-view point noise sigma, m");
  synth->add_option("--scene-seed", synth_options.scene.seed, "base scene seed");
  synth->add_flag("--disjoint", synth_options.disjoint, "export unrelated scene pairs");
  synth->add_option("--out", synth_out, "output directory")->required();
  double synth_range = 80.0;
  synth->add_option("--max-range", synth_range, "sensor range gate, m");

  // --- report ---
  auto* report = app.add_subcommand("report", "metrics from a record stream");
  std::string report_records, report_poses, report_out;
  report->add_option("--records", report_records, "record stream file")->required();
  report->add_option("--poses", report_poses, "ground-truth poses file")->required();
  report->add_option("--out", report_out, "directory for metrics.txt and pr_table.txt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? 0 : 1;
  }

  if (seq->parsed()) {
    const PipelineConfig config = seq_config.resolve();
    const ClassMap map = seq_config.resolve_class_map();
    std::filesystem::create_directories(seq_out);
    std::ofstream records(std::filesystem::path(seq_out) / "records.txt");
    if (!records) throw DataError("cannot open records.txt for writing");

    const SequenceResult result =
        process_sequence(seq_scans, seq_labels, config, map, &records, &std::cerr);
    std::cout << "scans processed: " << result.scans_processed
              << ", failed: " << result.scans_failed << "\n";

    if (!seq_poses.empty()) {
      const std::vector<PoseSE3> poses = load_poses(seq_poses);
      const MetricsSummary summary = summarize_records(result.records, poses);
      std::ofstream metrics(std::filesystem::path(seq_out) / "metrics.txt");
      write_metrics_summary(metrics, summary);
      write_metrics_summary(std::cout, summary);
      if (summary.pr_valid) {
        std::ofstream pr(std::filesystem::path(seq_out) / "pr_table.txt");
        write_pr_table(pr, summary.pr);
      }
    }
    return 0;
  }

  if (pair->parsed()) {
    const PipelineConfig config = pair_config.resolve();
    const ClassMap map = pair_config.resolve_class_map();
    const ScanFormat format = parse_format(pair_format);
    LoopPipeline pipeline(config, map);

    const ProcessedScan frame_a =
        pipeline.process_scan(load_labeled_scan(pair_scan_a, pair_labels_a, format, 0));
    const ProcessedScan frame_b =
        pipeline.process_scan(load_labeled_scan(pair_scan_b, pair_labels_b, format, 1));
    const LoopRecord record = pipeline.register_pair(frame_a, frame_b);
    print_record(std::cout, record);
    if (!pair_out.empty()) {
      std::ofstream out(pair_out, std::ios::app);
      if (!out) throw DataError("cannot open " + pair_out + " for appending");
      write_record(out, record);
    }
    return 0;
  }

  if (bench->parsed()) {
    const PipelineConfig config = bench_config.resolve();
    const ClassMap map = bench_config.resolve_class_map();
    std::vector<BenchTrial> trials;
    const BenchSummary summary = run_bench(bench_options, config, map, &trials, &std::cerr);
    std::cout << "trials " << summary.trials << "\n"
              << "accepted " << summary.accepted << "\n"
              << "registration_recall " << summary.registration_recall << "\n"
              << "median_rte_m " << summary.median_rte << "\n"
              << "median_rye_deg " << summary.median_rye << "\n"
              << "p50_ms " << summary.p50_ms << "\n"
              << "p90_ms " << summary.p90_ms << "\n";
    if (!bench_out.empty()) {
      std::filesystem::create_directories(bench_out);
      std::ofstream records(std::filesystem::path(bench_out) / "records.txt");
      write_record_header(records);
      for (const auto& t : trials) write_record(records, t.record);
    }
    return 0;
  }

  if (synth->parsed()) {
    export_bench_scenes(synth_options, synth_range, synth_out, &std::cerr);
    std::cout << "wrote " << synth_options.trials << " pairs under " << synth_out << "\n";
    return 0;
  }

  if (report->parsed()) {
    const std::vector<LoopRecord> records = load_records(report_records);
    const std::vector<PoseSE3> poses = load_poses(report_poses);
    const MetricsSummary summary = summarize_records(records, poses);
    write_metrics_summary(std::cout, summary);
    if (!report_out.empty()) {
      std::filesystem::create_directories(report_out);
      std::ofstream metrics(std::filesystem::path(report_out) / "metrics.txt");
      write_metrics_summary(metrics, summary);
      if (summary.pr_valid) {
        std::ofstream pr(std::filesystem::path(report_out) / "pr_table.txt");
        write_pr_table(pr, summary.pr);
      }
    }
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const semloop::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
