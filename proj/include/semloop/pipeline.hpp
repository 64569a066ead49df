#pragma once

#include "semloop/config.hpp"
#include "semloop/descriptor.hpp"
#include "semloop/graph.hpp"
#include "semloop/metrics.hpp"
#include "semloop/registration.hpp"
#include "semloop/retrieval.hpp"
#include "semloop/synthetic.hpp"
#include "semloop/types.hpp"
#include "semloop/verification.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace semloop {

// Outcome of one loop query (or one forced pair registration).
struct LoopRecord {
  std::int64_t query_id = -1;
  std::int64_t matched_id = -1;  // -1 when no candidate was available
  bool attempted = false;        // geometric verification ran
  bool accepted = false;
  double s_graph = 0.0;
  double s_background = 0.0;
  int inliers = 0;
  double retrieval_distance = 0.0;
  PoseSE3 t_coarse;
  PoseSE3 t_icp;
  PoseSE3 t_refine;
  double ms_descriptor = 0.0;
  double ms_retrieval = 0.0;
  double ms_verification = 0.0;
  double ms_refinement = 0.0;
  std::string reason;  // "ok" when accepted, otherwise why not

  double ms_query() const {
    return ms_descriptor + ms_retrieval + ms_verification + ms_refinement;
  }
};

// Everything the database keeps per keyframe.
struct ProcessedScan {
  std::int64_t id = -1;
  SemanticScan scan;  // moving classes already removed
  std::vector<Instance> instances;
  SemanticGraph graph;
  ScanDescriptor descriptor;
  BackgroundBEV bev;
  double ms_segmentation = 0.0;  // clustering; excluded from query timing
  double ms_descriptor = 0.0;    // graph + node descriptors + BEV + fusion
};

// Stateful sequence session: per-scan processing, loop queries against the
// keyframe database, keyframe insertion. Scans must be queried before they
// are inserted; ids must be unique.
class LoopPipeline {
 public:
  LoopPipeline(PipelineConfig config, ClassMap map);

  const PipelineConfig& config() const { return config_; }
  const ClassMap& class_map() const { return map_; }
  std::size_t keyframe_count() const { return frames_.size(); }

  // Segmentation + graph + descriptors for one scan (stateless, timed).
  ProcessedScan process_scan(SemanticScan scan) const;

  // Retrieval + verification (+ refinement when accepted) against the
  // stored keyframes. Does not insert the query.
  LoopRecord query(const ProcessedScan& query_scan) const;

  // Admit a processed scan into the database (subject to keyframe_stride).
  void insert(ProcessedScan frame);

  // Verification + refinement of an explicit pair, bypassing retrieval.
  LoopRecord register_pair(const ProcessedScan& query_scan,
                           const ProcessedScan& candidate_scan) const;

 private:
  PipelineConfig config_;
  ClassMap map_;
  RetrievalIndex index_;
  std::map<std::int64_t, ProcessedScan> frames_;
  std::int64_t scans_seen_ = 0;
};

// ---- record stream (line-structured text) ----

void write_record_header(std::ostream& out);
void write_record(std::ostream& out, const LoopRecord& record);
std::vector<LoopRecord> load_records(const std::filesystem::path& path);

// ---- sequence mode ----

struct SequenceResult {
  std::vector<LoopRecord> records;
  std::size_t scans_processed = 0;
  std::size_t scans_failed = 0;
};

// Processes every scan in `scan_dir` (ids = numeric file stems, ascending),
// querying each against the database before inserting it. Records are
// appended to `record_stream` as they are produced; failures are logged to
// `log` and skipped.
SequenceResult process_sequence(const std::filesystem::path& scan_dir,
                                const std::filesystem::path& label_dir,
                                const PipelineConfig& config, const ClassMap& map,
                                std::ostream* record_stream, std::ostream* log);

// ---- metrics over records ----

struct MetricsSummary {
  std::size_t queries = 0;
  std::size_t accepted = 0;
  std::size_t labeled = 0;        // decisions after gray-zone exclusion
  double f1_max = 0.0;
  double extended_precision = 0.0;
  double registration_recall = 0.0;  // over accepted true loops with gt
  double median_rte = 0.0;
  double median_rye = 0.0;
  std::vector<PrPoint> pr;
  bool pr_valid = false;  // needs >= 1 positive and >= 1 negative
};

// Ground-truth labeling by pose distance: < `positive_radius` is a true
// loop, > `negative_radius` a negative, anything between is excluded.
std::vector<LabeledDecision> label_records(const std::vector<LoopRecord>& records,
                                           const std::vector<PoseSE3>& poses,
                                           double positive_radius = 3.0,
                                           double negative_radius = 20.0);

MetricsSummary summarize_records(const std::vector<LoopRecord>& records,
                                 const std::vector<PoseSE3>& poses);

void write_metrics_summary(std::ostream& out, const MetricsSummary& summary);
void write_pr_table(std::ostream& out, const std::vector<PrPoint>& pr);

// ---- synthetic benchmark mode ----

struct BenchOptions {
  int trials = 100;
  double max_offset = 3.0;        // m, horizontal distance between the views
  double reverse_fraction = 0.35;  // share of pairs forced to |yaw| > 150 deg
  bool disjoint = false;           // scan_b comes from an unrelated scene
  SceneSpec scene;                 // seed is re-derived per trial
};

struct BenchTrial {
  LoopRecord record;
  PoseSE3 t_gt;
  double rte = 0.0;   // valid when accepted
  double rye = 0.0;   // valid when accepted
  double ms_pair = 0.0;
};

struct BenchSummary {
  int trials = 0;
  int accepted = 0;
  double registration_recall = 0.0;  // rejected trials count as failures
  double median_rte = 0.0;           // over accepted trials
  double median_rye = 0.0;
  double p50_ms = 0.0;  // per-pair wall time
  double p90_ms = 0.0;
};

BenchSummary run_bench(const BenchOptions& options, const PipelineConfig& config,
                       const ClassMap& map, std::vector<BenchTrial>* trials_out,
                       std::ostream* log);

// Deterministic per-trial scene and viewpoint setup, shared by run_bench
// and the scene exporter.
struct BenchPairSetup {
  SceneSpec spec_a;
  SceneSpec spec_b;  // distinct seed only in disjoint mode
  PoseSE3 pose_a;
  PoseSE3 pose_b;
  std::uint64_t noise_seed = 0;
};

BenchPairSetup bench_pair_setup(const BenchOptions& options, int trial);

// Materializes `trials` scene pairs as velodyne/<id>.bin + labels/<id>.label
// + poses.txt under out_dir (ids 2*trial and 2*trial+1). Each trial's world
// is shifted far from the others so pose-distance labeling stays honest.
void export_bench_scenes(const BenchOptions& options, double max_range,
                         const std::filesystem::path& out_dir, std::ostream* log);

}  // namespace semloop
