#include "toc/exemplar.hpp"

#include <fstream>

#include <json.hpp>

#include "toc/errors.hpp"

namespace toc {

std::vector<Exemplar> load_exemplar_store(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open exemplar store: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_array())
        throw DatasetError("exemplar store must be a JSON array: " + path);

    std::vector<Exemplar> store;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& ej = j[i];
        auto where = [&](const std::string& field) {
            return "exemplar[" + std::to_string(i) + "]." + field;
        };
        if (!ej.is_object() || !ej.contains("question") || !ej["question"].is_string())
            throw DatasetError(where("question") + ": missing or not a string");
        Exemplar ex;
        ex.question = ej["question"].get<std::string>();
        ex.long_answer = ej.value("long_answer", "");
        if (!ej.contains("disambiguations") || !ej["disambiguations"].is_array() ||
            ej["disambiguations"].empty())
            throw DatasetError(where("disambiguations") + ": must be a non-empty array");
        for (std::size_t d = 0; d < ej["disambiguations"].size(); ++d) {
            const auto& dj = ej["disambiguations"][d];
            DisambiguationPair pair;
            if (!dj.is_object() || !dj.contains("dq") || !dj["dq"].is_string())
                throw DatasetError(where("disambiguations[" + std::to_string(d) + "].dq") +
                                   ": missing or not a string");
            pair.dq = dj["dq"].get<std::string>();
            if (!dj.contains("answers") || !dj["answers"].is_array() || dj["answers"].empty())
                throw DatasetError(where("disambiguations[" + std::to_string(d) + "].answers") +
                                   ": must be a non-empty array");
            for (const auto& a : dj["answers"]) pair.answers.push_back(a.get<std::string>());
            ex.disambiguations.push_back(std::move(pair));
        }
        store.push_back(std::move(ex));
    }
    return store;
}

} // namespace toc
