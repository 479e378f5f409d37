#include "toc/llm.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "toc/errors.hpp"
#include "toc/http_util.hpp"
#include "toc/text.hpp"

namespace toc {

namespace {

int count_tokens(const std::string& text) {
    return static_cast<int>(whitespace_tokens(text).size());
}

TokenUsage make_usage(const CompletionRequest& request, const std::string& completion) {
    TokenUsage usage;
    usage.prompt_tokens = count_tokens(request.prompt);
    usage.completion_tokens = std::min(count_tokens(completion), request.max_tokens);
    return usage;
}

} // namespace

void CallBudget::reserve() {
    int current = spent_.load();
    while (true) {
        if (current >= cap_) throw BudgetExceeded(cap_);
        if (spent_.compare_exchange_weak(current, current + 1)) return;
    }
}

void CallBudget::release() {
    spent_.fetch_sub(1);
}

ScriptedBackend::ScriptedBackend(const std::string& fixture_dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(fixture_dir))
        throw FixtureStoreError("fixture directory does not exist: " + fixture_dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(fixture_dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::ifstream in(file);
        nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("text"))
            throw FixtureStoreError("malformed completion fixture: " + file.string());
        std::string hash = j.contains("prompt")
                               ? hash_hex(j["prompt"].get<std::string>())
                               : file.stem().string();
        entries_[hash] = j["text"].get<std::string>();
    }
}

void ScriptedBackend::add(const std::string& prompt, const std::string& response_text) {
    entries_[hash_hex(prompt)] = response_text;
}

CompletionResponse ScriptedBackend::complete(const CompletionRequest& request) {
    auto it = entries_.find(hash_hex(request.prompt));
    if (it == entries_.end()) throw FixtureMiss(hash_hex(request.prompt));
    CompletionResponse resp;
    resp.text = it->second;
    resp.usage = make_usage(request, resp.text);
    return resp;
}

CompletionResponse HttpBackend::complete(const CompletionRequest& request) {
    nlohmann::json body;
    body["prompt"] = request.prompt;
    body["max_tokens"] = request.max_tokens;
    body["top_p"] = request.top_p;
    if (!request.stop_sequences.empty()) body["stop"] = request.stop_sequences;
    if (request.temperature) body["temperature"] = *request.temperature;

    std::string last_error = "no attempt made";
    int last_status = 0;
    for (int attempt = 0; attempt <= retries_; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(backoff_ms_ << (attempt - 1)));
        }
        auto [client, path] = make_http_client(endpoint_);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = client->Post(path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport failure contacting " + endpoint_;
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "completion endpoint returned status " + std::to_string(res->status);
            last_status = res->status;
            continue;
        }
        nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("text") || !reply["text"].is_string()) {
            last_error = "completion reply has no \"text\" field";
            continue;
        }
        CompletionResponse out;
        out.text = reply["text"].get<std::string>();
        if (reply.contains("usage") && reply["usage"].is_object()) {
            out.usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
            out.usage.completion_tokens =
                std::min(reply["usage"].value("completion_tokens", 0), request.max_tokens);
        } else {
            out.usage = make_usage(request, out.text);
        }
        return out;
    }
    throw BackendUnavailable(last_error + " after " + std::to_string(retries_) + " retries",
                             last_status);
}

RecordingBackend::RecordingBackend(CompletionBackend& inner, std::string store_dir)
    : inner_(inner), store_dir_(std::move(store_dir)) {
    std::error_code ec;
    std::filesystem::create_directories(store_dir_, ec);
    if (ec || !std::filesystem::is_directory(store_dir_))
        throw FixtureStoreError("cannot create fixture store: " + store_dir_);
}

CompletionResponse RecordingBackend::complete(const CompletionRequest& request) {
    CompletionResponse resp = inner_.complete(request);
    std::string hash = hash_hex(request.prompt);
    nlohmann::json j;
    j["prompt"] = request.prompt;
    j["text"] = resp.text;
    j["usage"] = {{"prompt_tokens", resp.usage.prompt_tokens},
                  {"completion_tokens", resp.usage.completion_tokens}};
    std::ofstream out(std::filesystem::path(store_dir_) / (hash + ".json"));
    if (!out) throw FixtureStoreError("cannot write fixture " + hash + " in " + store_dir_);
    out << j.dump(2) << "\n";
    return resp;
}

RecordingBackend record_mode(CompletionBackend& backend, const std::string& store_dir) {
    return RecordingBackend(backend, store_dir);
}

CompletionResponse complete(CompletionBackend& backend, const CompletionRequest& request,
                            CallBudget& budget) {
    budget.reserve();
    try {
        return backend.complete(request);
    } catch (...) {
        budget.release();
        throw;
    }
}

} // namespace toc
