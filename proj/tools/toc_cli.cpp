// Command-line front end: ingest a corpus, run the clarification
// pipeline over questions, evaluate run records, inspect trees.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <json.hpp>

#include "toc/errors.hpp"
#include "toc/harness.hpp"

namespace fs = std::filesystem;

namespace {

void warn_to_stderr(const std::string& msg) { std::cerr << "[warn] " << msg << "\n"; }

std::map<std::string, std::string> read_config(const std::string& path) {
    if (path.empty()) return {};
    return toc::parse_config_file(path);
}

std::string config_value(const std::map<std::string, std::string>& kv,
                         const std::string& key) {
    auto it = kv.find(key);
    return it == kv.end() ? std::string() : it->second;
}

int run_ingest(const std::string& corpus_path, const std::string& index_dir) {
    auto documents = toc::read_jsonl_corpus(corpus_path);
    toc::CorpusIndex index = toc::ingest_corpus(documents);
    index.save(index_dir);
    std::cout << "indexed " << index.doc_count() << " passages from " << documents.size()
              << " documents into " << index_dir << "\n";
    return 0;
}

struct RunArgs {
    std::string dataset;
    std::string mapping;
    std::string question;
    std::string index_dir;
    std::string backend = "scripted";
    std::string fixtures;
    std::string out_dir;
    std::string config_path;
    std::string exemplars_path;
    int parallel = 1;
    int max_depth = -1;
    int max_valid_nodes = -1;
};

int run_run(const RunArgs& args) {
    auto kv = read_config(args.config_path);

    toc::PipelineConfig config;
    toc::apply_config(config, kv);
    if (args.max_depth > 0) config.max_depth = args.max_depth;
    if (args.max_valid_nodes > 0) config.max_valid_nodes = args.max_valid_nodes;
    config.validate();

    toc::CorpusIndex index = toc::CorpusIndex::load(args.index_dir);

    // Exemplars: explicit store file beats config key beats dataset train split.
    std::vector<toc::Exemplar> exemplars;
    std::vector<std::string> questions;
    std::string exemplar_source =
        !args.exemplars_path.empty() ? args.exemplars_path : config_value(kv, "exemplars");
    if (!args.dataset.empty()) {
        toc::DatasetBundle bundle = toc::load_dataset(args.dataset, args.mapping);
        std::cout << "dataset splits: train=" << bundle.counts.train
                  << " dev=" << bundle.counts.dev << " test=" << bundle.counts.test << "\n";
        exemplars = std::move(bundle.exemplars);
        for (const auto& ex : bundle.examples) questions.push_back(ex.aq);
    }
    if (!args.question.empty()) questions.push_back(args.question);
    if (!exemplar_source.empty()) exemplars = toc::load_exemplar_store(exemplar_source);
    if (questions.empty())
        throw toc::ConfigError("nothing to run: provide --dataset or --question");
    if (exemplars.empty())
        throw toc::ConfigError("no exemplars: provide --exemplars, config key "
                               "'exemplars', or a dataset with a train split");

    // Backend wiring. replay and scripted both replay prompt-keyed
    // fixtures; live talks to an HTTP endpoint and, when --fixtures is
    // given, records fixtures for later replay.
    fs::path fixtures_root(args.fixtures);
    fs::path llm_dir = fixtures_root / "llm";
    fs::path web_dir = fixtures_root / "web";

    std::unique_ptr<toc::CompletionBackend> backend;
    std::unique_ptr<toc::CompletionBackend> recorder;
    toc::CompletionBackend* backend_ptr = nullptr;
    if (args.backend == "scripted" || args.backend == "replay") {
        if (args.fixtures.empty())
            throw toc::ConfigError("backend '" + args.backend + "' requires --fixtures");
        fs::path dir = fs::is_directory(llm_dir) ? llm_dir : fixtures_root;
        backend = std::make_unique<toc::ScriptedBackend>(dir.string());
        backend_ptr = backend.get();
    } else if (args.backend == "live") {
        std::string endpoint = config_value(kv, "llm_endpoint");
        if (endpoint.empty())
            throw toc::ConfigError("backend 'live' requires config key 'llm_endpoint'");
        const char* key = std::getenv("TOC_API_KEY");
        backend = std::make_unique<toc::HttpBackend>(endpoint, key ? key : "");
        backend_ptr = backend.get();
        if (!args.fixtures.empty()) {
            recorder = std::make_unique<toc::RecordingBackend>(*backend, llm_dir.string());
            backend_ptr = recorder.get();
        }
    } else {
        throw toc::ConfigError("unknown backend '" + args.backend +
                               "' (expected live, replay, or scripted)");
    }

    std::unique_ptr<toc::WebSearchClient> web;
    if (args.backend == "live") {
        std::string web_endpoint = config_value(kv, "web_endpoint");
        if (!web_endpoint.empty())
            web = std::make_unique<toc::HttpWebSearch>(web_endpoint);
    } else if (fs::is_directory(web_dir)) {
        web = std::make_unique<toc::FixtureWebSearch>(web_dir.string());
    }

    std::unique_ptr<toc::PassageScorer> scorer;
    std::string scorer_endpoint = config_value(kv, "scorer_endpoint");
    if (!scorer_endpoint.empty())
        scorer = std::make_unique<toc::RemoteScorer>(scorer_endpoint);
    else
        scorer = std::make_unique<toc::CosineScorer>();

    toc::PipelineServices services;
    services.index = &index;
    services.web = web.get();
    services.scorer = scorer.get();
    services.backend = backend_ptr;
    services.exemplars = exemplars;
    services.warn = warn_to_stderr;

    auto records = toc::run_pipeline(questions, config, services, args.parallel);
    toc::write_records(records, args.out_dir);

    int ok = 0;
    for (const auto& rec : records) {
        if (rec.status == "ok") ++ok;
        std::cout << rec.question_id << "  " << rec.status;
        if (rec.status == "ok")
            std::cout << "  " << rec.ambiguity << "  calls=" << rec.budget.spent;
        else
            std::cout << "  " << rec.error;
        std::cout << "\n";
    }
    std::cout << ok << "/" << records.size() << " questions completed; records in "
              << args.out_dir << "\n";
    return 0;
}

int run_eval(const std::string& runs_dir, const std::string& gold_path,
             const std::string& report_path, const std::string& extractor_mode) {
    auto records = toc::read_records(runs_dir);
    auto gold = toc::load_gold(gold_path);

    toc::WindowExtractor extractor(extractor_mode == "blind"
                                       ? toc::WindowExtractor::Mode::blind
                                       : toc::WindowExtractor::Mode::oracle);
    toc::Evaluation eval = toc::evaluate(records, gold, extractor);

    std::ofstream out(report_path);
    if (!out) throw toc::Error("cannot write report file: " + report_path);
    out << toc::evaluation_to_json(eval).dump(2) << "\n";

    std::cout << "evaluated " << eval.evaluated << " questions";
    if (eval.skipped_errors) std::cout << " (skipped " << eval.skipped_errors << " error records)";
    std::cout << "\n";
    std::cout << "D-F1 " << eval.report.d_f1 << "  R-L " << eval.report.rouge_l << "  DR "
              << eval.report.dr;
    if (eval.report.answer_f1) std::cout << "  Answer-F1 " << *eval.report.answer_f1;
    std::cout << "\n";
    for (const auto& [k, v] : eval.retrieval.ac_at)
        std::cout << "AC@" << k << " " << v << "\n";
    std::cout << "report written to " << report_path << "\n";
    return 0;
}

int run_show_tree(const std::string& run_file) {
    std::ifstream in(run_file);
    if (!in) throw toc::Error("cannot open run record: " + run_file);
    nlohmann::json j;
    in >> j;
    toc::RunRecord rec = toc::RunRecord::from_json(j);

    std::cout << rec.question_id << "  [" << rec.status << "]\n";
    if (rec.status != "ok") std::cout << "error: " << rec.error << "\n";
    if (!rec.tree.nodes.empty()) std::cout << toc::format_tree(rec.tree);
    if (!rec.answer.text.empty()) {
        std::cout << "ambiguity: " << rec.ambiguity << "\n";
        std::cout << "answer" << (rec.answer.used_fallback ? " (fallback)" : "") << ": "
                  << rec.answer.text << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clarification-tree question answering pipeline"};
    app.require_subcommand(1);

    std::string corpus_path, index_dir;
    auto* ingest = app.add_subcommand("ingest", "Build a passage index from a JSONL corpus");
    ingest->add_option("--corpus", corpus_path, "JSONL corpus file")->required();
    ingest->add_option("--index", index_dir, "output index directory")->required();

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run the clarification pipeline");
    run->add_option("--dataset", run_args.dataset, "dataset JSON with train/dev/test splits");
    run->add_option("--mapping", run_args.mapping, "field-mapping JSON for the dataset");
    run->add_option("--question", run_args.question, "single question text");
    run->add_option("--index", run_args.index_dir, "passage index directory")->required();
    run->add_option("--backend", run_args.backend, "live, replay, or scripted");
    run->add_option("--fixtures", run_args.fixtures,
                    "fixture directory (llm/ and web/ subdirectories)");
    run->add_option("--out", run_args.out_dir, "run record output directory")->required();
    run->add_option("--config", run_args.config_path, "key = value config file");
    run->add_option("--exemplars", run_args.exemplars_path, "exemplar store JSON file");
    run->add_option("--parallel", run_args.parallel, "worker thread count");
    run->add_option("--max-depth", run_args.max_depth, "tree depth limit");
    run->add_option("--max-valid-nodes", run_args.max_valid_nodes, "valid node limit");

    std::string runs_dir, gold_path, report_path, extractor_mode = "oracle";
    auto* eval = app.add_subcommand("eval", "Score run records against gold answers");
    eval->add_option("--runs", runs_dir, "run record directory")->required();
    eval->add_option("--gold", gold_path, "gold dataset JSON")->required();
    eval->add_option("--report", report_path, "output report JSON")->required();
    eval->add_option("--extractor", extractor_mode, "oracle or blind");

    std::string run_file;
    auto* show = app.add_subcommand("show-tree", "Print the clarification tree of a run");
    show->add_option("--run", run_file, "run record JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return run_ingest(corpus_path, index_dir);
        if (run->parsed()) return run_run(run_args);
        if (eval->parsed()) return run_eval(runs_dir, gold_path, report_path, extractor_mode);
        if (show->parsed()) return run_show_tree(run_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
