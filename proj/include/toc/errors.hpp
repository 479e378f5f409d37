#pragma once

#include <stdexcept>
#include <string>

namespace toc {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// corpus
class EmptyCorpus : public Error {
public:
    EmptyCorpus() : Error("corpus: document stream is empty") {}
};

class MalformedRecord : public Error {
public:
    explicit MalformedRecord(const std::string& msg) : Error(msg) {}
};

class EmptyQuery : public Error {
public:
    explicit EmptyQuery(const std::string& msg = "query normalizes to zero terms")
        : Error(msg) {}
};

class RetrievalUnavailable : public Error {
public:
    explicit RetrievalUnavailable(const std::string& msg, int status = 0)
        : Error(msg), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

// rank
class EmptyExemplarStore : public Error {
public:
    EmptyExemplarStore() : Error("exemplar store is empty") {}
};

// llm-gateway
class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(int cap)
        : Error("call budget exhausted (cap " + std::to_string(cap) + ")") {}
};

class BackendUnavailable : public Error {
public:
    explicit BackendUnavailable(const std::string& msg, int status = 0)
        : Error(msg), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

class FixtureMiss : public Error {
public:
    explicit FixtureMiss(const std::string& prompt_hash)
        : Error("no fixture entry for prompt hash " + prompt_hash),
          prompt_hash_(prompt_hash) {}
    const std::string& prompt_hash() const { return prompt_hash_; }

private:
    std::string prompt_hash_;
};

class FixtureStoreError : public Error {
public:
    explicit FixtureStoreError(const std::string& msg) : Error(msg) {}
};

// prompts
class MissingContext : public Error {
public:
    MissingContext() : Error("prompt requires at least one context passage") {}
};

class MissingDisambiguations : public Error {
public:
    MissingDisambiguations() : Error("prompt requires at least one disambiguation") {}
};

class NoDisambiguations : public Error {
public:
    NoDisambiguations() : Error("model output contains no well-formed DQ/DA pairs") {}
};

class UnparseableVerdict : public Error {
public:
    UnparseableVerdict() : Error("model output contains neither 'True' nor 'False'") {}
};

// answer
class NoInterpretations : public Error {
public:
    NoInterpretations() : Error("tree has no usable disambiguation nodes") {}
};

// harness
class DatasetError : public Error {
public:
    explicit DatasetError(const std::string& msg) : Error(msg) {}
};

class MissingGold : public Error {
public:
    explicit MissingGold(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace toc
