#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace toc {

struct CompletionRequest {
    std::string prompt;
    int max_tokens = 300;
    double top_p = 1.0;
    std::vector<std::string> stop_sequences;
    std::optional<double> temperature; // pass-through, no default
};

struct TokenUsage {
    int prompt_tokens = 0;
    int completion_tokens = 0;
};

struct CompletionResponse {
    std::string text;
    TokenUsage usage;
};

// Per-question spend ledger. Thread-safe: reservation never overshoots
// the cap. Only completed model invocations stay counted.
class CallBudget {
public:
    explicit CallBudget(int cap = 20) : cap_(cap) {}

    int cap() const { return cap_; }
    int spent() const { return spent_.load(); }

    // Atomically claims one call slot; throws BudgetExceeded at the cap.
    void reserve();
    // Returns a reservation after a failed attempt.
    void release();

private:
    int cap_;
    std::atomic<int> spent_{0};
};

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

// Pure function of prompt text: replays canned responses keyed by
// hash_hex(prompt). Misses raise FixtureMiss naming the hash.
class ScriptedBackend : public CompletionBackend {
public:
    ScriptedBackend() = default;
    // Loads every <hash>.json fixture in dir.
    explicit ScriptedBackend(const std::string& fixture_dir);

    void add(const std::string& prompt, const std::string& response_text);
    std::size_t size() const { return entries_.size(); }

    CompletionResponse complete(const CompletionRequest& request) override;

private:
    std::unordered_map<std::string, std::string> entries_; // hash -> text
};

// Live completion endpoint: POST {"prompt","max_tokens","top_p","stop"},
// reply {"text","usage":{...}}. Two retries with exponential backoff,
// then BackendUnavailable.
class HttpBackend : public CompletionBackend {
public:
    explicit HttpBackend(std::string endpoint, std::string api_key = "",
                         int retries = 2, int backoff_ms = 100)
        : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)), retries_(retries),
          backoff_ms_(backoff_ms) {}

    CompletionResponse complete(const CompletionRequest& request) override;

private:
    std::string endpoint_;
    std::string api_key_;
    int retries_;
    int backoff_ms_;
};

// Wraps a live backend, persisting (prompt hash -> response) fixtures so
// later runs replay deterministically.
class RecordingBackend : public CompletionBackend {
public:
    RecordingBackend(CompletionBackend& inner, std::string store_dir);

    CompletionResponse complete(const CompletionRequest& request) override;

private:
    CompletionBackend& inner_;
    std::string store_dir_;
};

RecordingBackend record_mode(CompletionBackend& backend, const std::string& store_dir);

// Gateway entry point: enforces the budget, then invokes the backend.
// A failed invocation does not consume budget.
CompletionResponse complete(CompletionBackend& backend, const CompletionRequest& request,
                            CallBudget& budget);

} // namespace toc
