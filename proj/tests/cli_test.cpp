#include <doctest.h>

#include "toc/harness.hpp"
#include "toc/llm.hpp"

#include "helpers.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace toc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout + stderr interleaved
};

CliResult run_cli(const std::string& args, const fs::path& scratch) {
    fs::path capture = scratch / "cli_capture.txt";
    std::string cmd = std::string("\"") + TOC_CLI_PATH + "\" " + args + " > \"" +
                      capture.string() + "\" 2>&1";
    int raw = std::system(cmd.c_str());
    CliResult result;
    if (WIFEXITED(raw)) result.exit_code = WEXITSTATUS(raw);
    std::ifstream in(capture);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    return result;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

void write_corpus(const fs::path& path) {
    std::ofstream out(path);
    for (const auto& doc : testutil::olympic_docs()) {
        json j;
        j["title"] = doc.title;
        j["text"] = doc.text;
        out << j.dump() << "\n";
    }
}

void write_exemplar_store(const fs::path& path) {
    json arr = json::array();
    for (const auto& ex : testutil::exemplar_store(2)) {
        json e;
        e["question"] = ex.question;
        e["disambiguations"] = json::array();
        for (const auto& d : ex.disambiguations)
            e["disambiguations"].push_back({{"dq", d.dq}, {"answers", d.answers}});
        e["long_answer"] = ex.long_answer;
        arr.push_back(e);
    }
    write_file(path, arr.dump(2));
}

void write_gold(const fs::path& path) {
    json gold = json::array();
    json rec;
    rec["aq"] = testutil::kOlympicAq;
    rec["gold_disambiguations"] = json::array();
    rec["gold_disambiguations"].push_back(
        {{"dq", testutil::kGoldDq}, {"answers", {"United States"}}});
    rec["gold_disambiguations"].push_back(
        {{"dq", testutil::kWinterDq}, {"answers", {"Norway"}}});
    rec["gold_long_answers"] = {testutil::kOlympicLongAnswer, "A second reference."};
    gold.push_back(rec);
    write_file(path, gold.dump(2));
}

// Replay the exact pipeline in-process against a rule backend, capturing
// every prompt as a fixture the CLI can replay from disk.
void record_fixtures(const fs::path& index_dir, const fs::path& exemplar_file,
                     const fs::path& fixtures_dir) {
    CorpusIndex index = CorpusIndex::load(index_dir.string());
    auto exemplars = load_exemplar_store(exemplar_file.string());
    CosineScorer scorer;
    testutil::RuleBackend rules;
    RecordingBackend recorder(rules, (fixtures_dir / "llm").string());

    PipelineServices services;
    services.index = &index;
    services.scorer = &scorer;
    services.backend = &recorder;
    services.exemplars = exemplars;

    PipelineConfig config;
    auto rec = run_one(testutil::kOlympicAq, config, services);
    REQUIRE(rec.status == "ok");

    // also cover the prompts a capped run will issue
    PipelineConfig capped = config;
    capped.max_valid_nodes = 1;
    auto capped_rec = run_one(testutil::kOlympicAq, capped, services);
    REQUIRE(capped_rec.status == "ok");
}

} // namespace

TEST_CASE("the CLI covers ingest, run, show-tree, and eval end to end") {
    testutil::TempDir dir;
    auto corpus = dir.path() / "corpus.jsonl";
    auto index_dir = dir.path() / "index";
    auto exemplar_file = dir.path() / "exemplars.json";
    auto fixtures = dir.path() / "fixtures";
    write_corpus(corpus);
    write_exemplar_store(exemplar_file);

    auto ingest = run_cli("ingest --corpus \"" + corpus.string() + "\" --index \"" +
                              index_dir.string() + "\"",
                          dir.path());
    CHECK(ingest.exit_code == 0);
    CHECK(ingest.output.find("indexed 4 passages from 4 documents") != std::string::npos);
    CHECK(fs::exists(index_dir / "index.json"));

    record_fixtures(index_dir, exemplar_file, fixtures);

    auto out1 = dir.path() / "runs1";
    auto run1 = run_cli("run --question \"" + std::string(testutil::kOlympicAq) +
                            "\" --index \"" + index_dir.string() + "\" --backend replay" +
                            " --fixtures \"" + fixtures.string() + "\" --exemplars \"" +
                            exemplar_file.string() + "\" --out \"" + out1.string() + "\"",
                        dir.path());
    CHECK(run1.exit_code == 0);
    CHECK(run1.output.find("1/1 questions completed") != std::string::npos);
    CHECK(run1.output.find("ambiguous") != std::string::npos);

    std::string record_name = question_id_for(testutil::kOlympicAq) + ".json";
    CHECK(fs::exists(out1 / "manifest.json"));
    REQUIRE(fs::exists(out1 / record_name));

    auto show = run_cli("show-tree --run \"" + (out1 / record_name).string() + "\"",
                        dir.path());
    CHECK(show.exit_code == 0);
    CHECK(show.output.find("+ " + testutil::kGoldDq) != std::string::npos);
    CHECK(show.output.find("-> Norway") != std::string::npos);
    CHECK(show.output.find("ambiguity: ambiguous") != std::string::npos);
    CHECK(show.output.find("United States") != std::string::npos);

    auto gold_file = dir.path() / "gold.json";
    write_gold(gold_file);
    auto report_file = dir.path() / "report.json";
    auto eval = run_cli("eval --runs \"" + out1.string() + "\" --gold \"" +
                            gold_file.string() + "\" --report \"" + report_file.string() +
                            "\"",
                        dir.path());
    CHECK(eval.exit_code == 0);
    CHECK(eval.output.find("evaluated 1 questions") != std::string::npos);
    REQUIRE(fs::exists(report_file));
    std::ifstream rin(report_file);
    json report;
    rin >> report;
    CHECK(report.at("aggregate").at("dr").get<double>() == doctest::Approx(100.0));
    CHECK(report.at("per_question").size() == 1);

    // a second replay produces byte-identical canonical records
    auto out2 = dir.path() / "runs2";
    auto run2 = run_cli("run --question \"" + std::string(testutil::kOlympicAq) +
                            "\" --index \"" + index_dir.string() + "\" --backend replay" +
                            " --fixtures \"" + fixtures.string() + "\" --exemplars \"" +
                            exemplar_file.string() + "\" --out \"" + out2.string() + "\"",
                        dir.path());
    REQUIRE(run2.exit_code == 0);
    auto first = read_records(out1.string());
    auto second = read_records(out2.string());
    REQUIRE(first.size() == 1);
    REQUIRE(second.size() == 1);
    CHECK(first[0].canonical_json().dump(2) == second[0].canonical_json().dump(2));
}

TEST_CASE("CLI flag overrides reshape the tree") {
    testutil::TempDir dir;
    auto corpus = dir.path() / "corpus.jsonl";
    auto index_dir = dir.path() / "index";
    auto exemplar_file = dir.path() / "exemplars.json";
    auto fixtures = dir.path() / "fixtures";
    write_corpus(corpus);
    write_exemplar_store(exemplar_file);
    REQUIRE(run_cli("ingest --corpus \"" + corpus.string() + "\" --index \"" +
                        index_dir.string() + "\"",
                    dir.path())
                .exit_code == 0);
    record_fixtures(index_dir, exemplar_file, fixtures);

    // capping valid nodes at 1 keeps the second interpretation out
    auto out = dir.path() / "runs";
    auto run = run_cli("run --question \"" + std::string(testutil::kOlympicAq) +
                           "\" --index \"" + index_dir.string() + "\" --backend replay" +
                           " --fixtures \"" + fixtures.string() + "\" --exemplars \"" +
                           exemplar_file.string() + "\" --out \"" + out.string() + "\"" +
                           " --max-valid-nodes 1",
                       dir.path());
    REQUIRE(run.exit_code == 0);
    auto records = read_records(out.string());
    REQUIRE(records.size() == 1);
    CHECK(records[0].status == "ok");
    CHECK(records[0].tree.nodes.size() == 2);
}

TEST_CASE("config files steer the CLI run") {
    testutil::TempDir dir;
    auto corpus = dir.path() / "corpus.jsonl";
    auto index_dir = dir.path() / "index";
    auto exemplar_file = dir.path() / "exemplars.json";
    auto fixtures = dir.path() / "fixtures";
    write_corpus(corpus);
    write_exemplar_store(exemplar_file);
    REQUIRE(run_cli("ingest --corpus \"" + corpus.string() + "\" --index \"" +
                        index_dir.string() + "\"",
                    dir.path())
                .exit_code == 0);
    record_fixtures(index_dir, exemplar_file, fixtures);

    auto config_file = dir.path() / "run.conf";
    write_file(config_file, "# exemplars via config key\n"
                            "exemplars = " +
                                exemplar_file.string() + "\n");
    auto out = dir.path() / "runs";
    auto run = run_cli("run --question \"" + std::string(testutil::kOlympicAq) +
                           "\" --index \"" + index_dir.string() + "\" --backend replay" +
                           " --fixtures \"" + fixtures.string() + "\" --config \"" +
                           config_file.string() + "\" --out \"" + out.string() + "\"",
                       dir.path());
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("1/1 questions completed") != std::string::npos);
}

TEST_CASE("bad invocations exit nonzero with a message") {
    testutil::TempDir dir;
    auto nonsense = run_cli("frobnicate", dir.path());
    CHECK(nonsense.exit_code != 0);

    auto no_required = run_cli("run --question \"x\"", dir.path());
    CHECK(no_required.exit_code != 0);

    auto missing_index = run_cli("ingest --corpus \"" +
                                     (dir.path() / "absent.jsonl").string() +
                                     "\" --index \"" + (dir.path() / "i").string() + "\"",
                                 dir.path());
    CHECK(missing_index.exit_code != 0);
    CHECK(missing_index.output.find("error:") != std::string::npos);

    // with a real index and exemplars in place the backend checks get their turn
    auto corpus = dir.path() / "corpus.jsonl";
    auto index_dir = dir.path() / "index";
    auto exemplar_file = dir.path() / "exemplars.json";
    write_corpus(corpus);
    write_exemplar_store(exemplar_file);
    REQUIRE(run_cli("ingest --corpus \"" + corpus.string() + "\" --index \"" +
                        index_dir.string() + "\"",
                    dir.path())
                .exit_code == 0);

    auto no_exemplars = run_cli("run --question \"x\" --index \"" + index_dir.string() +
                                    "\" --backend replay --fixtures \"" +
                                    (dir.path() / "f").string() + "\" --out \"" +
                                    (dir.path() / "out").string() + "\"",
                                dir.path());
    CHECK(no_exemplars.exit_code != 0);
    CHECK(no_exemplars.output.find("no exemplars") != std::string::npos);

    auto no_fixtures = run_cli("run --question \"x\" --index \"" + index_dir.string() +
                                   "\" --backend replay --exemplars \"" +
                                   exemplar_file.string() + "\" --out \"" +
                                   (dir.path() / "out").string() + "\"",
                               dir.path());
    CHECK(no_fixtures.exit_code != 0);
    CHECK(no_fixtures.output.find("requires --fixtures") != std::string::npos);

    auto bad_backend = run_cli("run --question \"x\" --index \"" + index_dir.string() +
                                   "\" --backend warp --fixtures \"" +
                                   (dir.path() / "f").string() + "\" --exemplars \"" +
                                   exemplar_file.string() + "\" --out \"" +
                                   (dir.path() / "out").string() + "\"",
                               dir.path());
    CHECK(bad_backend.exit_code != 0);
    CHECK(bad_backend.output.find("unknown backend") != std::string::npos);
}
