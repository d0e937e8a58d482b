#pragma once
// Question units: statement-shaped queries with wildcard and literal
// bindings, executed against a store snapshot, and AND/OR composition.

#include "kgbb/model.hpp"
#include "kgbb/spec.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kgbb {

enum class AnswerMode { boolean, list };

std::string_view to_string(AnswerMode m);

struct BuiltQuestion {
    QuestionUnit question;
    AnswerMode mode = AnswerMode::list;
};

// Throws BindingTypeMismatch / InvalidArgument for bindings that do not fit
// the KGBB's positions.
void validate_question(const Specification& spec, const QuestionUnit& q);

// Boolean mode iff the subject and every bound position are fully
// specified (named individuals or exact literals).
AnswerMode answer_mode(const QuestionUnit& q);

BuiltQuestion build_question(const Specification& spec, const Upri& kgbb, std::optional<Binding> subject_binding,
                             std::map<Upri, Binding> bindings);

struct QuestionResult {
    AnswerMode mode = AnswerMode::list;
    std::vector<Upri> units;  // sorted
    bool answer() const { return !units.empty(); }
};

// True when one statement unit satisfies the question. Shared by the
// executor and by tests that scan stores directly.
bool statement_matches(const Specification& spec, const Store& store, const StatementUnit& unit, const QuestionUnit& q);

QuestionResult execute_question(const Specification& spec, const Store& store, const QuestionUnit& q);

// Leaves name question units stored in `store`.
std::set<Upri> execute_compound(const Specification& spec, const Store& store, const QuestionExpr& expr);
std::set<Upri> execute_compound(const Specification& spec, const Store& store, const CompoundQuestionUnit& cq);

// "Did Anna travel by train from Berlin to Rome?"
std::string render_question_label(const Specification& spec, const Store& store, const QuestionUnit& q);

} // namespace kgbb
