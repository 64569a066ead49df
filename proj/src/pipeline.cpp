#include "semloop/pipeline.hpp"

#include "semloop/clustering.hpp"
#include "semloop/scan_io.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

namespace semloop {

namespace {

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Per-pair RANSAC seed so candidate order never changes a pair's outcome.
std::uint64_t pair_seed(std::uint64_t base, std::int64_t query_id, std::int64_t candidate_id) {
  return splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(query_id) * 2654435761ULL +
                                      static_cast<std::uint64_t>(candidate_id)));
}

int env_thread_count() {
  const char* raw = std::getenv("SEMLOOP_THREADS");
  if (!raw) return 1;
  const int n = std::atoi(raw);
  return n >= 1 ? n : 1;
}

}  // namespace

LoopPipeline::LoopPipeline(PipelineConfig config, ClassMap map)
    : config_(std::move(config)), map_(std::move(map)) {
  config_.validate();
}

ProcessedScan LoopPipeline::process_scan(SemanticScan scan) const {
  ProcessedScan frame;
  frame.id = scan.scan_id;
  frame.scan = drop_moving_points(scan, map_);

  const Stopwatch seg_timer;
  frame.instances = cluster_foreground(frame.scan, map_);
  frame.ms_segmentation = seg_timer.ms();

  const Stopwatch desc_timer;
  frame.graph = build_graph(frame.instances, config_.graph.d_max);
  const EdgeCategoryTable table(map_.foreground_classes());
  node_descriptors(frame.graph, table, config_.graph);
  const Eigen::VectorXd fg = foreground_descriptor(frame.graph, table, config_.graph);
  frame.bev = background_descriptor(frame.scan, map_, config_.bev);
  frame.descriptor = fuse(fg, frame.bev.flattened_ring_key());
  frame.ms_descriptor = desc_timer.ms();
  return frame;
}

LoopRecord LoopPipeline::query(const ProcessedScan& query_scan) const {
  LoopRecord record;
  record.query_id = query_scan.id;
  record.ms_descriptor = query_scan.ms_descriptor;
  record.reason = "no candidates";

  const Stopwatch retrieval_timer;
  const std::vector<RetrievalMatch> candidates = index_.query(
      query_scan.descriptor.fused, query_scan.id, config_.top_n, config_.exclusion_window);
  record.ms_retrieval = retrieval_timer.ms();
  if (candidates.empty()) return record;

  // Verify candidates in ascending retrieval distance. All results are
  // computed (optionally in parallel), then arbitrated deterministically;
  // with one thread the loop stops early at the first acceptance.
  const Stopwatch verify_timer;
  const int threads = std::min<int>(env_thread_count(), static_cast<int>(candidates.size()));
  std::vector<VerificationResult> results(candidates.size());
  const auto verify_one = [&](std::size_t i) {
    const ProcessedScan& cand = frames_.at(candidates[i].scan_id);
    VerificationConfig vc = config_.verification;
    vc.ransac_seed = pair_seed(config_.seed ^ config_.verification.ransac_seed, query_scan.id,
                               cand.id);
    results[i] = verify(query_scan.bev, query_scan.graph, cand.scan, cand.graph, map_,
                        config_.bev, vc);
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      verify_one(i);
      if (results[i].accepted && !config_.pick_best_graph) break;
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < candidates.size();
             i = next.fetch_add(1)) {
          verify_one(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Arbitration: first acceptance in retrieval order, or the accepted
  // candidate with the best S_graph when pick_best_graph is set. When
  // nothing is accepted, report the attempt with the highest S_graph.
  int chosen = -1;
  int best_failed = -1;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (results[i].reason.empty()) continue;  // not verified (early exit)
    if (results[i].accepted) {
      if (chosen < 0 ||
          (config_.pick_best_graph &&
           results[i].s_graph > results[chosen].s_graph)) {
        chosen = static_cast<int>(i);
      }
      if (!config_.pick_best_graph) break;
    } else if (best_failed < 0 ||
               results[i].s_graph > results[best_failed].s_graph) {
      best_failed = static_cast<int>(i);
    }
  }
  record.ms_verification = verify_timer.ms();

  const int reported = chosen >= 0 ? chosen : best_failed;
  if (reported < 0) return record;  // nothing was verified; keep defaults

  const VerificationResult& vr = results[reported];
  record.matched_id = candidates[reported].scan_id;
  record.retrieval_distance = candidates[reported].distance;
  record.attempted = true;
  record.accepted = vr.accepted;
  record.s_graph = vr.s_graph;
  record.s_background = vr.s_background;
  record.inliers = static_cast<int>(vr.inlier_count());
  record.t_coarse = vr.t_coarse;
  record.t_icp = vr.t_coarse;
  record.t_refine = vr.t_coarse;
  record.reason = vr.reason;

  if (vr.accepted) {
    const Stopwatch refine_timer;
    const ProcessedScan& cand = frames_.at(record.matched_id);
    const RegistrationReport report =
        refine(query_scan.scan, query_scan.instances, cand.scan, cand.instances, vr.inliers,
               vr.t_coarse, map_, config_.refine);
    record.t_icp = report.t_icp;
    record.t_refine = report.t_refine;
    record.ms_refinement = refine_timer.ms();
  }
  return record;
}

void LoopPipeline::insert(ProcessedScan frame) {
  const std::int64_t position = scans_seen_++;
  if (position % config_.keyframe_stride != 0) return;
  if (frames_.count(frame.id)) {
    throw std::invalid_argument("pipeline: duplicate scan id " + std::to_string(frame.id));
  }
  index_.insert(frame.id, frame.descriptor.fused);
  frames_.emplace(frame.id, std::move(frame));
}

LoopRecord LoopPipeline::register_pair(const ProcessedScan& query_scan,
                                       const ProcessedScan& candidate_scan) const {
  LoopRecord record;
  record.query_id = query_scan.id;
  record.matched_id = candidate_scan.id;
  record.ms_descriptor = query_scan.ms_descriptor + candidate_scan.ms_descriptor;
  record.attempted = true;
  record.retrieval_distance =
      (query_scan.descriptor.fused - candidate_scan.descriptor.fused).norm();

  const Stopwatch verify_timer;
  VerificationConfig vc = config_.verification;
  vc.ransac_seed = pair_seed(config_.seed ^ config_.verification.ransac_seed, query_scan.id,
                             candidate_scan.id);
  const VerificationResult vr = verify(query_scan.bev, query_scan.graph, candidate_scan.scan,
                                       candidate_scan.graph, map_, config_.bev, vc);
  record.ms_verification = verify_timer.ms();

  record.accepted = vr.accepted;
  record.s_graph = vr.s_graph;
  record.s_background = vr.s_background;
  record.inliers = static_cast<int>(vr.inlier_count());
  record.t_coarse = vr.t_coarse;
  record.t_icp = vr.t_coarse;
  record.t_refine = vr.t_coarse;
  record.reason = vr.reason;

  if (vr.accepted) {
    const Stopwatch refine_timer;
    const RegistrationReport report =
        refine(query_scan.scan, query_scan.instances, candidate_scan.scan,
               candidate_scan.instances, vr.inliers, vr.t_coarse, map_, config_.refine);
    record.t_icp = report.t_icp;
    record.t_refine = report.t_refine;
    record.ms_refinement = refine_timer.ms();
  }
  return record;
}

// ---- record stream ----

namespace {

void write_pose(std::ostream& out, const PoseSE3& pose) {
  const Eigen::Matrix<double, 3, 4> m = pose.matrix34();
  char buf[32];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      std::snprintf(buf, sizeof(buf), " %.17g", m(r, c));
      out << buf;
    }
  }
}

PoseSE3 read_pose(std::istringstream& in) {
  Eigen::Matrix<double, 3, 4> m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (!(in >> m(r, c))) throw DataError("record stream: truncated pose");
    }
  }
  PoseSE3 pose;
  pose.rotation = m.leftCols<3>();
  pose.translation = m.col(3);
  return pose;
}

std::string sanitize_reason(const std::string& reason) {
  std::string out = reason.empty() ? std::string("-") : reason;
  for (char& c : out) {
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  }
  return out;
}

}  // namespace

void write_record_header(std::ostream& out) {
  out << "# loop records v1\n"
      << "# query_id matched_id attempted accepted s_graph s_background inliers"
         " retrieval_distance t_coarse[12] t_icp[12] t_refine[12]"
         " ms_descriptor ms_retrieval ms_verification ms_refinement reason\n";
}

void write_record(std::ostream& out, const LoopRecord& r) {
  char buf[64];
  out << r.query_id << ' ' << r.matched_id << ' ' << (r.attempted ? 1 : 0) << ' '
      << (r.accepted ? 1 : 0);
  std::snprintf(buf, sizeof(buf), " %.17g %.17g", r.s_graph, r.s_background);
  out << buf << ' ' << r.inliers;
  std::snprintf(buf, sizeof(buf), " %.17g", r.retrieval_distance);
  out << buf;
  write_pose(out, r.t_coarse);
  write_pose(out, r.t_icp);
  write_pose(out, r.t_refine);
  std::snprintf(buf, sizeof(buf), " %.3f %.3f %.3f %.3f", r.ms_descriptor, r.ms_retrieval,
                r.ms_verification, r.ms_refinement);
  out << buf << ' ' << sanitize_reason(r.reason) << '\n';
}

std::vector<LoopRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("record stream: cannot open " + path.string());
  std::vector<LoopRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    LoopRecord r;
    int attempted = 0, accepted = 0;
    if (!(ss >> r.query_id >> r.matched_id >> attempted >> accepted >> r.s_graph >>
          r.s_background >> r.inliers >> r.retrieval_distance)) {
      throw DataError("record stream: " + path.string() + ":" + std::to_string(line_no) +
                      ": malformed record");
    }
    r.attempted = attempted != 0;
    r.accepted = accepted != 0;
    r.t_coarse = read_pose(ss);
    r.t_icp = read_pose(ss);
    r.t_refine = read_pose(ss);
    if (!(ss >> r.ms_descriptor >> r.ms_retrieval >> r.ms_verification >> r.ms_refinement)) {
      throw DataError("record stream: " + path.string() + ":" + std::to_string(line_no) +
                      ": malformed timings");
    }
    ss >> r.reason;
    records.push_back(std::move(r));
  }
  return records;
}

// ---- sequence mode ----

SequenceResult process_sequence(const std::filesystem::path& scan_dir,
                                const std::filesystem::path& label_dir,
                                const PipelineConfig& config, const ClassMap& map,
                                std::ostream* record_stream, std::ostream* log) {
  std::vector<std::pair<std::int64_t, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(scan_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto& path = entry.path();
    if (path.extension() != ".bin") continue;
    try {
      files.emplace_back(std::stoll(path.stem().string()), path);
    } catch (const std::exception&) {
      if (log) *log << "skipping non-numeric scan file " << path << "\n";
    }
  }
  std::sort(files.begin(), files.end());

  LoopPipeline pipeline(config, map);
  SequenceResult result;
  if (record_stream) write_record_header(*record_stream);

  for (const auto& [id, path] : files) {
    try {
      SemanticScan scan = load_scan(path, ScanFormat::kKittiBin).scan;
      scan.scan_id = id;
      const auto label_path = label_dir / (path.stem().string() + ".label");
      scan = attach_labels(std::move(scan), load_labels(label_path));

      ProcessedScan frame = pipeline.process_scan(std::move(scan));
      LoopRecord record = pipeline.query(frame);
      pipeline.insert(std::move(frame));

      if (record_stream) {
        write_record(*record_stream, record);
        record_stream->flush();
      }
      result.records.push_back(std::move(record));
      ++result.scans_processed;
    } catch (const std::exception& e) {
      ++result.scans_failed;
      if (log) *log << "scan " << id << " failed: " << e.what() << "\n";
    }
  }
  return result;
}

// ---- metrics over records ----

std::vector<LabeledDecision> label_records(const std::vector<LoopRecord>& records,
                                           const std::vector<PoseSE3>& poses,
                                           double positive_radius, double negative_radius) {
  std::vector<LabeledDecision> decisions;
  for (const auto& r : records) {
    if (r.matched_id < 0) continue;
    if (r.query_id < 0 || static_cast<std::size_t>(r.query_id) >= poses.size() ||
        static_cast<std::size_t>(r.matched_id) >= poses.size()) {
      continue;
    }
    const PoseSE3& pq = poses[r.query_id];
    const PoseSE3& pm = poses[r.matched_id];
    const double distance = (pq.translation - pm.translation).norm();
    if (distance >= positive_radius && distance <= negative_radius) continue;  // gray zone

    LabeledDecision d;
    d.query_id = r.query_id;
    d.candidate_id = r.matched_id;
    d.is_true_loop = distance < positive_radius;
    // Verification similarity when the stage produced one; otherwise a
    // monotone transform of retrieval distance that ranks below any S_graph.
    d.score = r.attempted && r.s_graph > 0.0 ? r.s_graph
                                             : std::exp(-r.retrieval_distance) - 1.0;
    if (r.accepted) d.estimated = r.t_refine;
    d.ground_truth = pq.inverse().compose(pm);
    decisions.push_back(std::move(d));
  }
  return decisions;
}

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

MetricsSummary summarize_records(const std::vector<LoopRecord>& records,
                                 const std::vector<PoseSE3>& poses) {
  MetricsSummary summary;
  summary.queries = records.size();
  for (const auto& r : records) {
    if (r.accepted) ++summary.accepted;
  }

  const std::vector<LabeledDecision> decisions = label_records(records, poses);
  summary.labeled = decisions.size();

  std::size_t positives = 0;
  for (const auto& d : decisions) {
    if (d.is_true_loop) ++positives;
  }
  if (positives > 0 && positives < decisions.size()) {
    summary.pr = pr_sweep(decisions);
    summary.f1_max = f1_max(summary.pr);
    summary.extended_precision = extended_precision(summary.pr);
    summary.pr_valid = true;
  }

  std::vector<std::pair<double, double>> errors;
  std::vector<double> rtes, ryes;
  for (const auto& d : decisions) {
    if (!d.is_true_loop || !d.estimated || !d.ground_truth) continue;
    errors.push_back(pose_errors(*d.estimated, *d.ground_truth));
    rtes.push_back(errors.back().first);
    ryes.push_back(errors.back().second);
  }
  if (!errors.empty()) {
    summary.registration_recall = registration_recall(errors);
    summary.median_rte = median_of(rtes);
    summary.median_rye = median_of(ryes);
  }
  return summary;
}

void write_metrics_summary(std::ostream& out, const MetricsSummary& summary) {
  out << "queries " << summary.queries << "\n"
      << "accepted " << summary.accepted << "\n"
      << "labeled_decisions " << summary.labeled << "\n";
  if (summary.pr_valid) {
    out << "f1_max " << summary.f1_max << "\n"
        << "extended_precision " << summary.extended_precision << "\n";
  }
  out << "registration_recall " << summary.registration_recall << "\n"
      << "median_rte_m " << summary.median_rte << "\n"
      << "median_rye_deg " << summary.median_rye << "\n";
}

void write_pr_table(std::ostream& out, const std::vector<PrPoint>& pr) {
  out << "# threshold precision recall\n";
  for (const auto& p : pr) {
    out << p.threshold << ' ' << p.precision << ' ' << p.recall << '\n';
  }
}

// ---- synthetic benchmark mode ----

BenchPairSetup bench_pair_setup(const BenchOptions& options, int trial) {
  BenchPairSetup setup;
  setup.spec_a = options.scene;
  setup.spec_a.seed = splitmix64(options.scene.seed + static_cast<std::uint64_t>(trial));
  setup.spec_b = setup.spec_a;
  if (options.disjoint) {
    setup.spec_b.seed = splitmix64(setup.spec_a.seed ^ 0xD15C0DE5ULL);
  }
  setup.noise_seed = splitmix64(setup.spec_a.seed + 1);

  std::mt19937_64 rng(splitmix64(setup.spec_a.seed ^ 0xB10C0DE5ULL));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double ax = (unit(rng) * 2.0 - 1.0) * 5.0;
  const double ay = (unit(rng) * 2.0 - 1.0) * 5.0;
  const double ayaw = unit(rng) * 2.0 * M_PI - M_PI;
  setup.pose_a = yaw_pose(ax, ay, 1.8, ayaw);

  const double dir = unit(rng) * 2.0 * M_PI;
  const double dist = unit(rng) * options.max_offset;
  const bool reverse =
      trial % 100 < static_cast<int>(std::lround(options.reverse_fraction * 100.0));
  double dyaw;
  if (reverse) {
    const double magnitude = deg2rad(150.0) + unit(rng) * deg2rad(30.0);
    dyaw = unit(rng) < 0.5 ? magnitude : -magnitude;
  } else {
    dyaw = unit(rng) * 2.0 * M_PI - M_PI;
  }
  setup.pose_b =
      yaw_pose(ax + dist * std::cos(dir), ay + dist * std::sin(dir), 1.8, ayaw + dyaw);
  return setup;
}

BenchSummary run_bench(const BenchOptions& options, const PipelineConfig& config,
                       const ClassMap& map, std::vector<BenchTrial>* trials_out,
                       std::ostream* log) {
  if (options.trials < 1) throw std::invalid_argument("bench: trials must be >= 1");

  LoopPipeline pipeline(config, map);
  BenchSummary summary;
  summary.trials = options.trials;

  std::vector<double> rtes, ryes, times;
  int registered = 0;

  for (int trial = 0; trial < options.trials; ++trial) {
    const Stopwatch pair_timer;
    const BenchPairSetup setup = bench_pair_setup(options, trial);

    BenchTrial t;
    SemanticScan scan_a, scan_b;
    if (options.disjoint) {
      // Unrelated scenes: observe each from its own viewpoint; any
      // acceptance is a false positive.
      const SyntheticScene scene_a = generate_scene(setup.spec_a);
      const SyntheticScene scene_b = generate_scene(setup.spec_b);
      ScenePair view_a = observe_pair(scene_a, setup.pose_a, setup.pose_a,
                                      config.bev.max_range, options.scene.noise_sigma,
                                      setup.noise_seed);
      ScenePair view_b = observe_pair(scene_b, setup.pose_b, setup.pose_b,
                                      config.bev.max_range, options.scene.noise_sigma,
                                      splitmix64(setup.noise_seed + 1));
      scan_a = std::move(view_a.scan_a);
      scan_b = std::move(view_b.scan_a);
      t.t_gt = PoseSE3::identity();  // meaningless for disjoint pairs
    } else {
      const SyntheticScene scene = generate_scene(setup.spec_a);
      ScenePair pair = observe_pair(scene, setup.pose_a, setup.pose_b, config.bev.max_range,
                                    options.scene.noise_sigma, setup.noise_seed);
      scan_a = std::move(pair.scan_a);
      scan_b = std::move(pair.scan_b);
      t.t_gt = pair.t_gt;
    }
    scan_a.scan_id = 2 * trial;
    scan_b.scan_id = 2 * trial + 1;

    const ProcessedScan frame_a = pipeline.process_scan(std::move(scan_a));
    const ProcessedScan frame_b = pipeline.process_scan(std::move(scan_b));
    t.record = pipeline.register_pair(frame_a, frame_b);
    t.ms_pair = pair_timer.ms();
    times.push_back(t.ms_pair);

    if (t.record.accepted) {
      ++summary.accepted;
      std::tie(t.rte, t.rye) = pose_errors(t.record.t_refine, t.t_gt);
      rtes.push_back(t.rte);
      ryes.push_back(t.rye);
      if (t.rte < 2.0 && t.rye < 5.0) ++registered;
    }
    if (log && (trial + 1) % 20 == 0) {
      *log << "bench: " << (trial + 1) << "/" << options.trials << " trials\n";
    }
    if (trials_out) trials_out->push_back(std::move(t));
  }

  summary.registration_recall =
      100.0 * static_cast<double>(registered) / static_cast<double>(options.trials);
  summary.median_rte = median_of(rtes);
  summary.median_rye = median_of(ryes);
  std::sort(times.begin(), times.end());
  summary.p50_ms = times[times.size() / 2];
  summary.p90_ms = times[std::min(times.size() - 1, times.size() * 9 / 10)];
  return summary;
}

void export_bench_scenes(const BenchOptions& options, double max_range,
                         const std::filesystem::path& out_dir, std::ostream* log) {
  if (options.trials < 1) throw std::invalid_argument("export: trials must be >= 1");
  const auto scan_dir = out_dir / "velodyne";
  const auto label_dir = out_dir / "labels";
  std::filesystem::create_directories(scan_dir);
  std::filesystem::create_directories(label_dir);

  std::vector<PoseSE3> poses;
  const auto save_view = [&](const SemanticScan& scan, std::int64_t id, const PoseSE3& pose) {
    char name[32];
    std::snprintf(name, sizeof(name), "%06lld", static_cast<long long>(id));
    save_scan_kitti_bin(scan_dir / (std::string(name) + ".bin"), scan);
    save_labels(label_dir / (std::string(name) + ".label"), scan.labels);
    poses.push_back(pose);
  };

  for (int trial = 0; trial < options.trials; ++trial) {
    const BenchPairSetup setup = bench_pair_setup(options, trial);
    // Keep trials far apart in world coordinates so distance-based loop
    // labels never pair scans from different trials.
    PoseSE3 shift;
    shift.translation = {trial * 500.0, 0.0, 0.0};

    if (options.disjoint) {
      const SyntheticScene scene_a = generate_scene(setup.spec_a);
      const SyntheticScene scene_b = generate_scene(setup.spec_b);
      ScenePair view_a = observe_pair(scene_a, setup.pose_a, setup.pose_a, max_range,
                                      options.scene.noise_sigma, setup.noise_seed);
      ScenePair view_b = observe_pair(scene_b, setup.pose_b, setup.pose_b, max_range,
                                      options.scene.noise_sigma,
                                      splitmix64(setup.noise_seed + 1));
      save_view(view_a.scan_a, 2 * trial, shift.compose(setup.pose_a));
      save_view(view_b.scan_a, 2 * trial + 1, shift.compose(setup.pose_b));
    } else {
      const SyntheticScene scene = generate_scene(setup.spec_a);
      const ScenePair pair = observe_pair(scene, setup.pose_a, setup.pose_b, max_range,
                                          options.scene.noise_sigma, setup.noise_seed);
      save_view(pair.scan_a, 2 * trial, shift.compose(setup.pose_a));
      save_view(pair.scan_b, 2 * trial + 1, shift.compose(setup.pose_b));
    }
    if (log && (trial + 1) % 20 == 0) {
      *log << "export: " << (trial + 1) << "/" << options.trials << " pairs\n";
    }
  }
  save_poses(out_dir / "poses.txt", poses);
}

}  // namespace semloop
