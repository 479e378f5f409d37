#include "toc/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "toc/errors.hpp"
#include "toc/text.hpp"

namespace toc {

namespace fs = std::filesystem;
using nlohmann::json;

nlohmann::json passage_to_json(const Passage& p) {
    json j;
    j["id"] = p.id;
    j["title"] = p.title;
    j["text"] = p.text;
    j["source"] = to_string(p.source);
    j["score"] = p.score ? json(*p.score) : json(nullptr);
    return j;
}

Passage passage_from_json(const nlohmann::json& j) {
    Passage p;
    p.id = j.at("id").get<std::string>();
    p.title = j.at("title").get<std::string>();
    p.text = j.at("text").get<std::string>();
    p.source = passage_source_from_string(j.at("source").get<std::string>());
    if (!j.at("score").is_null()) p.score = j.at("score").get<double>();
    return p;
}

CompletionResponse TranscriptBackend::complete(const CompletionRequest& request) {
    CompletionResponse response = inner_.complete(request);
    entries_.push_back({hash_hex(request.prompt), request.prompt, response.text});
    return response;
}

std::string question_id_for(const std::string& aq) { return "q" + hash_hex(aq); }

namespace {

json config_to_json(const PipelineConfig& c) {
    return {{"k_shots", c.k_shots},
            {"top_k_passages", c.top_k_passages},
            {"max_valid_nodes", c.max_valid_nodes},
            {"max_depth", c.max_depth},
            {"failure_limit", c.failure_limit},
            {"call_cap", c.call_cap},
            {"pool_cap", c.pool_cap},
            {"answer_max_disambiguations", c.answer_max_disambiguations},
            {"answer_max_passages", c.answer_max_passages}};
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    c.k_shots = j.at("k_shots").get<int>();
    c.top_k_passages = j.at("top_k_passages").get<int>();
    c.max_valid_nodes = j.at("max_valid_nodes").get<int>();
    c.max_depth = j.at("max_depth").get<int>();
    c.failure_limit = j.at("failure_limit").get<int>();
    c.call_cap = j.at("call_cap").get<int>();
    c.pool_cap = j.at("pool_cap").get<int>();
    c.answer_max_disambiguations = j.at("answer_max_disambiguations").get<int>();
    c.answer_max_passages = j.at("answer_max_passages").get<int>();
    return c;
}

json record_body(const RunRecord& r) {
    json j;
    j["question_id"] = r.question_id;
    j["aq"] = r.aq;
    j["config"] = config_to_json(r.config);
    j["status"] = r.status;
    j["error"] = r.error;
    j["ambiguity"] = r.ambiguity;
    j["tree"] = r.tree.nodes.empty() ? json(nullptr) : r.tree.to_json();
    j["ranked_pool"] = json::array();
    for (const auto& p : r.ranked_pool) j["ranked_pool"].push_back(passage_to_json(p));
    j["transcript"] = json::array();
    for (const auto& t : r.transcript)
        j["transcript"].push_back(
            {{"hash", t.hash}, {"prompt", t.prompt}, {"completion", t.completion}});
    j["answer"] = {{"text", r.answer.text},
                   {"used_disambiguations", r.answer.used_disambiguations},
                   {"used_passages", r.answer.used_passages},
                   {"fallback", r.answer.used_fallback}};
    j["budget"] = {{"cap", r.budget.cap}, {"spent", r.budget.spent}};
    return j;
}

} // namespace

nlohmann::json RunRecord::to_json() const {
    json j = record_body(*this);
    j["timing_ms"] = timing_ms;
    return j;
}

nlohmann::json RunRecord::canonical_json() const { return record_body(*this); }

RunRecord RunRecord::from_json(const nlohmann::json& j) {
    RunRecord r;
    r.question_id = j.at("question_id").get<std::string>();
    r.aq = j.at("aq").get<std::string>();
    r.config = config_from_json(j.at("config"));
    r.status = j.at("status").get<std::string>();
    r.error = j.at("error").get<std::string>();
    r.ambiguity = j.at("ambiguity").get<std::string>();
    if (!j.at("tree").is_null()) r.tree = ClarificationTree::from_json(j.at("tree"));
    for (const auto& pj : j.at("ranked_pool")) r.ranked_pool.push_back(passage_from_json(pj));
    for (const auto& tj : j.at("transcript"))
        r.transcript.push_back({tj.at("hash").get<std::string>(),
                                tj.at("prompt").get<std::string>(),
                                tj.at("completion").get<std::string>()});
    const auto& aj = j.at("answer");
    r.answer.text = aj.at("text").get<std::string>();
    r.answer.used_disambiguations = aj.at("used_disambiguations").get<std::vector<NodeId>>();
    r.answer.used_passages = aj.at("used_passages").get<std::vector<std::string>>();
    r.answer.used_fallback = aj.at("fallback").get<bool>();
    if (!r.ambiguity.empty())
        r.answer.ambiguity = r.ambiguity == "ambiguous" ? Ambiguity::ambiguous
                                                        : Ambiguity::unambiguous;
    r.budget.cap = j.at("budget").at("cap").get<int>();
    r.budget.spent = j.at("budget").at("spent").get<int>();
    if (j.contains("timing_ms")) r.timing_ms = j.at("timing_ms").get<double>();
    return r;
}

namespace {

struct KeyMap {
    std::string train = "train";
    std::string dev = "dev";
    std::string test = "test";
    std::string aq = "aq";
    std::string disambiguations = "disambiguations";
    std::string dq = "dq";
    std::string answers = "answers";
    std::string long_answers = "long_answers";
};

KeyMap load_key_map(const std::string& path) {
    KeyMap km;
    if (path.empty()) return km;
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open field mapping file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DatasetError("field mapping parse error: " + std::string(e.what()));
    }
    if (!j.is_object()) throw DatasetError("field mapping must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string() || value.get<std::string>().empty())
            throw DatasetError("field mapping value for '" + key +
                               "' must be a non-empty string");
        std::string v = value.get<std::string>();
        if (key == "train") km.train = v;
        else if (key == "dev") km.dev = v;
        else if (key == "test") km.test = v;
        else if (key == "aq") km.aq = v;
        else if (key == "disambiguations") km.disambiguations = v;
        else if (key == "dq") km.dq = v;
        else if (key == "answers") km.answers = v;
        else if (key == "long_answers") km.long_answers = v;
        else throw DatasetError("field mapping: unknown key '" + key + "'");
    }
    return km;
}

json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw DatasetError(std::string("cannot open ") + what + " file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DatasetError(std::string(what) + " parse error: " + std::string(e.what()));
    }
    return j;
}

std::string require_string(const json& rec, const std::string& key, const std::string& ctx) {
    if (!rec.is_object() || !rec.contains(key) || !rec.at(key).is_string() ||
        rec.at(key).get<std::string>().empty())
        throw DatasetError(ctx + "." + key + " must be a non-empty string");
    return rec.at(key).get<std::string>();
}

std::vector<DisambiguationPair> parse_pairs(const json& rec, const KeyMap& km,
                                            const std::string& ctx) {
    if (!rec.contains(km.disambiguations) || !rec.at(km.disambiguations).is_array() ||
        rec.at(km.disambiguations).empty())
        throw DatasetError(ctx + "." + km.disambiguations + " must be a non-empty array");
    std::vector<DisambiguationPair> pairs;
    const auto& arr = rec.at(km.disambiguations);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string dctx = ctx + "." + km.disambiguations + "[" + std::to_string(i) + "]";
        const auto& d = arr[i];
        if (!d.is_object()) throw DatasetError(dctx + " must be an object");
        DisambiguationPair pair;
        pair.dq = require_string(d, km.dq, dctx);
        if (!d.contains(km.answers) || !d.at(km.answers).is_array() ||
            d.at(km.answers).empty())
            throw DatasetError(dctx + "." + km.answers + " must be a non-empty array");
        for (const auto& a : d.at(km.answers)) {
            if (!a.is_string() || a.get<std::string>().empty())
                throw DatasetError(dctx + "." + km.answers +
                                   " entries must be non-empty strings");
            pair.answers.push_back(a.get<std::string>());
        }
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::vector<std::string> parse_long_answers(const json& rec, const KeyMap& km,
                                            const std::string& ctx) {
    if (!rec.contains(km.long_answers) || !rec.at(km.long_answers).is_array())
        throw DatasetError(ctx + "." + km.long_answers + " must be an array");
    std::vector<std::string> out;
    for (const auto& a : rec.at(km.long_answers)) {
        if (!a.is_string() || a.get<std::string>().empty())
            throw DatasetError(ctx + "." + km.long_answers +
                               " entries must be non-empty strings");
        out.push_back(a.get<std::string>());
    }
    return out;
}

Exemplar parse_train_record(const json& rec, const KeyMap& km, const std::string& ctx) {
    Exemplar ex;
    ex.question = require_string(rec, km.aq, ctx);
    ex.disambiguations = parse_pairs(rec, km, ctx);
    auto longs = parse_long_answers(rec, km, ctx);
    if (longs.empty())
        throw DatasetError(ctx + "." + km.long_answers + " must contain at least 1 entry");
    ex.long_answer = longs.front();
    return ex;
}

EvalExample parse_eval_record(const json& rec, const KeyMap& km, const std::string& ctx) {
    EvalExample ex;
    ex.aq = require_string(rec, km.aq, ctx);
    for (auto& pair : parse_pairs(rec, km, ctx))
        ex.gold_disambiguations.push_back({std::move(pair.dq), std::move(pair.answers)});
    ex.gold_long_answers = parse_long_answers(rec, km, ctx);
    if (ex.gold_long_answers.size() != 2)
        throw DatasetError(ctx + "." + km.long_answers + " must contain exactly 2 entries");
    return ex;
}

} // namespace

DatasetBundle load_dataset(const std::string& path, const std::string& mapping_path) {
    KeyMap km = load_key_map(mapping_path);
    json j = read_json_file(path, "dataset");

    DatasetBundle bundle;
    auto read_eval_split = [&](const json& arr, const std::string& name) {
        for (std::size_t i = 0; i < arr.size(); ++i)
            bundle.examples.push_back(
                parse_eval_record(arr[i], km, name + "[" + std::to_string(i) + "]"));
        return static_cast<int>(arr.size());
    };

    if (j.is_array()) {
        bundle.counts.dev = read_eval_split(j, km.dev);
        return bundle;
    }
    if (!j.is_object())
        throw DatasetError("dataset must be a JSON object with splits or a JSON array");
    if (!j.contains(km.train) && !j.contains(km.dev) && !j.contains(km.test))
        throw DatasetError("dataset contains none of the splits '" + km.train + "', '" +
                           km.dev + "', '" + km.test + "'");

    if (j.contains(km.train)) {
        const auto& arr = j.at(km.train);
        if (!arr.is_array()) throw DatasetError(km.train + " split must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            bundle.exemplars.push_back(
                parse_train_record(arr[i], km, km.train + "[" + std::to_string(i) + "]"));
        bundle.counts.train = static_cast<int>(arr.size());
    }
    if (j.contains(km.dev)) {
        const auto& arr = j.at(km.dev);
        if (!arr.is_array()) throw DatasetError(km.dev + " split must be an array");
        bundle.counts.dev = read_eval_split(arr, km.dev);
    }
    if (j.contains(km.test)) {
        const auto& arr = j.at(km.test);
        if (!arr.is_array()) throw DatasetError(km.test + " split must be an array");
        bundle.counts.test = read_eval_split(arr, km.test);
    }
    return bundle;
}

std::vector<EvalExample> load_gold(const std::string& path) {
    json j = read_json_file(path, "gold dataset");
    if (!j.is_array()) throw DatasetError("gold dataset must be a JSON array");
    std::vector<EvalExample> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string ctx = "gold[" + std::to_string(i) + "]";
        const auto& rec = j[i];
        EvalExample ex;
        ex.aq = require_string(rec, "aq", ctx);
        if (!rec.contains("gold_disambiguations") ||
            !rec.at("gold_disambiguations").is_array() ||
            rec.at("gold_disambiguations").empty())
            throw DatasetError(ctx + ".gold_disambiguations must be a non-empty array");
        const auto& arr = rec.at("gold_disambiguations");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            std::string dctx = ctx + ".gold_disambiguations[" + std::to_string(k) + "]";
            const auto& d = arr[k];
            GoldDisambiguation gd;
            gd.dq = require_string(d, "dq", dctx);
            if (!d.contains("answers") || !d.at("answers").is_array() ||
                d.at("answers").empty())
                throw DatasetError(dctx + ".answers must be a non-empty array");
            for (const auto& a : d.at("answers")) {
                if (!a.is_string() || a.get<std::string>().empty())
                    throw DatasetError(dctx + ".answers entries must be non-empty strings");
                gd.gold_answers.push_back(a.get<std::string>());
            }
            ex.gold_disambiguations.push_back(std::move(gd));
        }
        if (!rec.contains("gold_long_answers") || !rec.at("gold_long_answers").is_array())
            throw DatasetError(ctx + ".gold_long_answers must be an array");
        for (const auto& a : rec.at("gold_long_answers")) {
            if (!a.is_string() || a.get<std::string>().empty())
                throw DatasetError(ctx + ".gold_long_answers entries must be non-empty strings");
            ex.gold_long_answers.push_back(a.get<std::string>());
        }
        if (ex.gold_long_answers.size() != 2)
            throw DatasetError(ctx + ".gold_long_answers must contain exactly 2 entries");
        ex.validate(ctx);
        out.push_back(std::move(ex));
    }
    return out;
}

RunRecord run_one(const std::string& aq, const PipelineConfig& config,
                  const PipelineServices& services) {
    auto start = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.question_id = question_id_for(aq);
    rec.aq = aq;
    rec.config = config;

    CallBudget budget(config.call_cap);
    TranscriptBackend transcript(*services.backend);
    try {
        config.validate();
        if (!services.index) throw ConfigError("pipeline run requires a corpus index");
        if (!services.scorer) throw ConfigError("pipeline run requires a passage scorer");
        if (!services.backend)
            throw ConfigError("pipeline run requires a completion backend");

        Services svc;
        svc.exemplars = services.exemplars;
        svc.scorer = services.scorer;
        svc.backend = &transcript;
        svc.budget = &budget;
        svc.warn = services.warn;

        std::vector<Passage> local = services.index->search(aq, services.local_k);
        std::vector<Passage> web;
        if (services.web) {
            try {
                web = services.web->search(aq, services.web_k);
            } catch (const RetrievalUnavailable& e) {
                svc.note("web search unavailable (" + std::string(e.what()) +
                         "); continuing with local passages only");
            }
        }
        PassagePool pool = combine_pools(local, web, config.pool_cap, aq);
        if (pool.empty()) throw MissingContext();

        rec.ranked_pool =
            rerank(aq, pool.passages, static_cast<int>(pool.size()), *services.scorer);
        rec.tree = build_tree(aq, pool, config, svc);
        rec.answer = generate_answer(aq, rec.tree, pool, config, svc);
        rec.ambiguity = to_string(rec.answer.ambiguity);
    } catch (const std::exception& e) {
        rec.status = "error";
        rec.error = e.what();
    }

    rec.transcript = transcript.entries();
    rec.budget = {budget.cap(), budget.spent()};
    rec.timing_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    return rec;
}

std::vector<RunRecord> run_pipeline(std::span<const std::string> questions,
                                    const PipelineConfig& config,
                                    const PipelineServices& services, int parallel) {
    std::vector<RunRecord> records(questions.size());
    if (questions.empty()) return records;

    int workers = std::max(1, parallel);
    workers = std::min<int>(workers, static_cast<int>(questions.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < questions.size(); ++i)
            records[i] = run_one(questions[i], config, services);
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < questions.size();
                 i = next.fetch_add(1))
                records[i] = run_one(questions[i], config, services);
        });
    }
    for (auto& t : threads) t.join();
    return records;
}

void write_records(std::span<const RunRecord> records, const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error("cannot create run directory: " + out_dir);

    json manifest;
    manifest["records"] = json::array();
    for (const auto& rec : records) {
        fs::path file = fs::path(out_dir) / (rec.question_id + ".json");
        std::ofstream out(file);
        if (!out) throw Error("cannot write run record: " + file.string());
        out << rec.to_json().dump(2) << "\n";
        manifest["records"].push_back(
            {{"id", rec.question_id}, {"aq", rec.aq}, {"status", rec.status}});
    }
    fs::path mf = fs::path(out_dir) / "manifest.json";
    std::ofstream out(mf);
    if (!out) throw Error("cannot write run manifest: " + mf.string());
    out << manifest.dump(2) << "\n";
}

std::vector<RunRecord> read_records(const std::string& run_dir) {
    std::vector<RunRecord> records;
    fs::path manifest = fs::path(run_dir) / "manifest.json";
    std::vector<fs::path> files;
    if (fs::exists(manifest)) {
        json j = read_json_file(manifest.string(), "run manifest");
        for (const auto& entry : j.at("records"))
            files.push_back(fs::path(run_dir) /
                            (entry.at("id").get<std::string>() + ".json"));
    } else {
        if (!fs::is_directory(run_dir)) throw Error("not a run directory: " + run_dir);
        for (const auto& entry : fs::directory_iterator(run_dir))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
    }
    for (const auto& file : files)
        records.push_back(RunRecord::from_json(read_json_file(file.string(), "run record")));
    if (records.empty()) throw Error("no run records found in: " + run_dir);
    return records;
}

Evaluation evaluate(std::span<const RunRecord> records, std::span<const EvalExample> gold,
                    const AnswerExtractor& extractor) {
    std::map<std::string, const EvalExample*> by_aq;
    for (const auto& g : gold) by_aq.emplace(g.aq, &g);

    std::vector<std::pair<const RunRecord*, const EvalExample*>> matched;
    std::string missing;
    Evaluation eval;
    for (const auto& rec : records) {
        if (rec.status != "ok") {
            eval.skipped_errors += 1;
            continue;
        }
        auto it = by_aq.find(rec.aq);
        if (it == by_aq.end()) {
            if (!missing.empty()) missing += ", ";
            missing += rec.question_id;
            continue;
        }
        matched.emplace_back(&rec, it->second);
    }
    if (!missing.empty())
        throw MissingGold("no gold entry for run records: " + missing);

    static constexpr std::array<int, 3> ks{10, 30, 100};
    double sum_d = 0.0, sum_r = 0.0, sum_a = 0.0;
    std::map<int, double> sum_ac;
    for (auto [rec, ex] : matched) {
        PerQuestionScore row;
        row.question_id = rec->question_id;
        row.aq = rec->aq;
        row.d_f1 = disambig_f1(rec->answer.text, *ex, extractor);
        row.rouge_l = 100.0 * rouge_l(rec->answer.text, ex->gold_long_answers);
        row.dr = dr(row.d_f1, row.rouge_l);

        double af = 0.0;
        if (!rec->answer.used_disambiguations.empty() && !rec->tree.nodes.empty()) {
            double sum = 0.0;
            for (NodeId id : rec->answer.used_disambiguations) {
                const TreeNode& node = rec->tree.node(id);
                const GoldDisambiguation* best = &ex->gold_disambiguations.front();
                double best_score = -1.0;
                for (const auto& g : ex->gold_disambiguations) {
                    double s = token_f1(node.question, std::span<const std::string>(&g.dq, 1));
                    if (s > best_score) {
                        best_score = s;
                        best = &g;
                    }
                }
                sum += answer_f1(node.answers, best->gold_answers);
            }
            af = sum / static_cast<double>(rec->answer.used_disambiguations.size());
        }
        row.answer_f1 = af;

        row.ac_at = answer_coverage(rec->ranked_pool, *ex, ks).ac_at;

        sum_d += row.d_f1;
        sum_r += row.rouge_l;
        sum_a += af;
        for (const auto& [k, v] : row.ac_at) sum_ac[k] += v;
        eval.report.per_question.push_back(std::move(row));
    }

    eval.evaluated = static_cast<int>(matched.size());
    double n = static_cast<double>(matched.size());
    if (!matched.empty()) {
        eval.report.d_f1 = sum_d / n;
        eval.report.rouge_l = sum_r / n;
        eval.report.answer_f1 = sum_a / n;
        for (const auto& [k, v] : sum_ac) eval.retrieval.ac_at[k] = v / n;
    } else {
        for (int k : ks) eval.retrieval.ac_at[k] = 0.0;
    }
    eval.report.dr = dr(eval.report.d_f1, eval.report.rouge_l);
    return eval;
}

nlohmann::json evaluation_to_json(const Evaluation& eval) {
    json j;
    j["aggregate"] = {{"d_f1", eval.report.d_f1},
                      {"rouge_l", eval.report.rouge_l},
                      {"dr", eval.report.dr}};
    if (eval.report.answer_f1) j["aggregate"]["answer_f1"] = *eval.report.answer_f1;
    j["retrieval"]["ac_at"] = json::object();
    for (const auto& [k, v] : eval.retrieval.ac_at)
        j["retrieval"]["ac_at"][std::to_string(k)] = v;
    j["per_question"] = json::array();
    for (const auto& row : eval.report.per_question) {
        json rj = {{"id", row.question_id},
                   {"aq", row.aq},
                   {"d_f1", row.d_f1},
                   {"rouge_l", row.rouge_l},
                   {"dr", row.dr}};
        if (row.answer_f1) rj["answer_f1"] = *row.answer_f1;
        rj["ac_at"] = json::object();
        for (const auto& [k, v] : row.ac_at) rj["ac_at"][std::to_string(k)] = v;
        j["per_question"].push_back(std::move(rj));
    }
    j["evaluated"] = eval.evaluated;
    j["skipped_errors"] = eval.skipped_errors;
    return j;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = trim_copy(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim_copy(trimmed.substr(0, eq));
        std::string value = trim_copy(trimmed.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

void apply_config(PipelineConfig& config, const std::map<std::string, std::string>& kv) {
    auto set_int = [&](const char* name, int& field) {
        auto it = kv.find(name);
        if (it == kv.end()) return;
        int value = 0;
        const char* begin = it->second.data();
        const char* end = begin + it->second.size();
        auto [ptr, err] = std::from_chars(begin, end, value);
        if (err != std::errc() || ptr != end)
            throw ConfigError("config key '" + std::string(name) +
                              "': expected integer, got '" + it->second + "'");
        field = value;
    };
    set_int("k_shots", config.k_shots);
    set_int("top_k_passages", config.top_k_passages);
    set_int("max_valid_nodes", config.max_valid_nodes);
    set_int("max_depth", config.max_depth);
    set_int("failure_limit", config.failure_limit);
    set_int("call_cap", config.call_cap);
    set_int("pool_cap", config.pool_cap);
    set_int("answer_max_disambiguations", config.answer_max_disambiguations);
    set_int("answer_max_passages", config.answer_max_passages);
}

namespace {

std::string status_marker(NodeStatus s) {
    switch (s) {
    case NodeStatus::root: return "*";
    case NodeStatus::valid: return "+";
    case NodeStatus::restored: return "~";
    case NodeStatus::pruned_duplicate:
    case NodeStatus::pruned_verification: return "-";
    }
    return "?";
}

std::string status_tag(NodeStatus s) {
    switch (s) {
    case NodeStatus::root: return "root";
    case NodeStatus::valid: return "valid";
    case NodeStatus::restored: return "restored";
    case NodeStatus::pruned_duplicate: return "pruned: duplicate";
    case NodeStatus::pruned_verification: return "pruned: verification";
    }
    return "?";
}

} // namespace

std::string format_tree(const ClarificationTree& tree) {
    if (tree.nodes.empty()) return "(empty tree)\n";

    std::vector<std::vector<NodeId>> children(tree.nodes.size());
    for (const auto& n : tree.nodes)
        if (n.parent) children[static_cast<std::size_t>(*n.parent)].push_back(n.id);

    std::ostringstream out;
    std::function<void(NodeId, int)> emit = [&](NodeId id, int indent) {
        const TreeNode& n = tree.node(id);
        out << std::string(static_cast<std::size_t>(indent) * 2, ' ')
            << status_marker(n.status) << " " << n.question;
        if (!n.answers.empty()) {
            out << "  -> ";
            for (std::size_t i = 0; i < n.answers.size(); ++i) {
                if (i) out << "; ";
                out << n.answers[i];
            }
        }
        out << "  [" << status_tag(n.status) << "]";
        if (n.evidence) out << " (evidence " << *n.evidence << ")";
        out << "\n";
        for (NodeId child : children[static_cast<std::size_t>(id)]) emit(child, indent + 1);
    };
    emit(tree.nodes.front().id, 0);
    out << "valid=" << tree.counters.valid_count
        << " consecutive_failures=" << tree.counters.consecutive_failures
        << " llm_calls=" << tree.counters.llm_calls << "\n";
    return out.str();
}

} // namespace toc
