#pragma once
// Shared fixtures for the unit and acceptance tests: demo spec loading,
// a deterministic engine clock, random workloads and independent oracles.

#include "kgbb/engine.hpp"
#include "kgbb/spec.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace kgbb::testing {

std::filesystem::path data_path(const std::string& rel);
std::string read_file(const std::filesystem::path& p);

std::shared_ptr<const Specification> demo_spec();
std::shared_ptr<const Specification> loop_spec();

// Clock starting at 2024-01-01T00:00:00Z, one millisecond per call, and a
// seeded minter: identical call sequences yield identical stores.
EngineOptions deterministic_options(std::uint64_t seed);

Upri demo(const std::string& local);
Upri obo(const std::string& local);
Upri user(const std::string& name = "alice");

// Anna travels by train from Berlin to Rome on the 5th of August 2019.
CreateRequest golden_travel_request();

// Random create/update/version/delete/question traffic over the demo spec.
// Failures are expected (locked units, deleted units, max counts) and are
// counted, not thrown.
struct OpStats {
    std::size_t attempted = 0;
    std::size_t succeeded = 0;
};

OpStats random_ops(Engine& e, std::mt19937_64& rng, std::size_t n);

// Mostly travel statements over small resource pools; stops once the store
// holds `units` units.
void grow_travel_store(Engine& e, std::mt19937_64& rng, std::size_t units);

// Random travel / has-part questions: named, wildcard and literal bindings.
QuestionUnit random_question(const Store& store, std::mt19937_64& rng);

// ---- oracles (independent of the library's matching code) -----------------

// Ancestors of a class by walking declared parents.
std::set<Upri> class_closure(const Specification& spec, const Upri& cls);

// Full scan of the store. Returns matching statement units, sorted.
std::vector<Upri> oracle_answer(const Specification& spec, const Store& store, const QuestionUnit& q);

// True when the answer is a yes/no: subject and all bindings fully bound.
bool oracle_boolean(const QuestionUnit& q);

// Year of a date literal in one of the accepted lexical forms.
std::optional<int> oracle_year(const std::string& value);

} // namespace kgbb::testing
