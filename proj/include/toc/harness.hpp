#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "toc/answer.hpp"
#include "toc/corpus.hpp"
#include "toc/metrics.hpp"
#include "toc/web_search.hpp"

namespace toc {

inline constexpr int kLocalRetrievalDepth = 150;
inline constexpr int kWebRetrievalDepth = 100;

nlohmann::json passage_to_json(const Passage& p);
Passage passage_from_json(const nlohmann::json& j);

struct TranscriptEntry {
    std::string hash;
    std::string prompt;
    std::string completion;
};

// Wraps a backend and keeps every prompt/completion pair that went
// through it. One instance per question, so no locking.
class TranscriptBackend : public CompletionBackend {
public:
    explicit TranscriptBackend(CompletionBackend& inner) : inner_(inner) {}

    CompletionResponse complete(const CompletionRequest& request) override;

    const std::vector<TranscriptEntry>& entries() const { return entries_; }

private:
    CompletionBackend& inner_;
    std::vector<TranscriptEntry> entries_;
};

struct BudgetLedger {
    int cap = 0;
    int spent = 0;
};

// Everything one question's run produced, persisted as a single JSON
// file. canonical_json drops wall-clock timing so replayed runs compare
// byte-identically.
struct RunRecord {
    std::string question_id;
    std::string aq;
    PipelineConfig config;
    std::string status = "ok"; // ok | error
    std::string error;
    std::string ambiguity;
    ClarificationTree tree; // empty nodes when the run failed early
    std::vector<Passage> ranked_pool;
    std::vector<TranscriptEntry> transcript;
    LongFormAnswer answer;
    BudgetLedger budget;
    double timing_ms = 0.0;

    nlohmann::json to_json() const;
    nlohmann::json canonical_json() const;
    static RunRecord from_json(const nlohmann::json& j);
};

std::string question_id_for(const std::string& aq);

struct SplitCounts {
    int train = 0;
    int dev = 0;
    int test = 0;
};

struct DatasetBundle {
    std::vector<Exemplar> exemplars;   // train split
    std::vector<EvalExample> examples; // dev + test splits
    SplitCounts counts;
};

// Canonical dataset layout: {"train":[...],"dev":[...],"test":[...]},
// each record {"aq","disambiguations":[{"dq","answers":[...]}],
// "long_answers":[...]}. Dev/test records carry exactly two long
// answers. A bare top-level array is read as a dev split. The optional
// mapping file renames canonical keys to whatever the source file uses.
DatasetBundle load_dataset(const std::string& path, const std::string& mapping_path = "");

// Gold file for eval: JSON array of {"aq","gold_disambiguations":
// [{"dq","answers":[...]}],"gold_long_answers":[ref1,ref2]}.
std::vector<EvalExample> load_gold(const std::string& path);

struct PipelineServices {
    const CorpusIndex* index = nullptr;
    WebSearchClient* web = nullptr; // optional; degraded to local-only on failure
    PassageScorer* scorer = nullptr;
    CompletionBackend* backend = nullptr;
    std::span<const Exemplar> exemplars;
    WarnFn warn;
    int local_k = kLocalRetrievalDepth;
    int web_k = kWebRetrievalDepth;
};

RunRecord run_one(const std::string& aq, const PipelineConfig& config,
                  const PipelineServices& services);

// Batch runner. A failure on one question becomes an error record, never
// aborts the batch. parallel > 1 fans questions out over worker threads;
// output order always matches input order.
std::vector<RunRecord> run_pipeline(std::span<const std::string> questions,
                                    const PipelineConfig& config,
                                    const PipelineServices& services, int parallel = 1);

// One <question_id>.json per record plus manifest.json.
void write_records(std::span<const RunRecord> records, const std::string& out_dir);
std::vector<RunRecord> read_records(const std::string& run_dir);

struct Evaluation {
    EvalReport report;
    RetrievalReport retrieval;
    int evaluated = 0;
    int skipped_errors = 0;
};

// Scores ok-status records against gold examples matched by exact AQ
// text. Unmatched records raise MissingGold listing their ids.
Evaluation evaluate(std::span<const RunRecord> records, std::span<const EvalExample> gold,
                    const AnswerExtractor& extractor);

nlohmann::json evaluation_to_json(const Evaluation& eval);

// key = value lines; blank lines and # comments ignored.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Applies the pipeline keys from kv, leaving unknown keys untouched for
// the caller. Throws ConfigError on non-integer values.
void apply_config(PipelineConfig& config, const std::map<std::string, std::string>& kv);

// Indented tree listing with one status-marked line per node.
std::string format_tree(const ClarificationTree& tree);

} // namespace toc
