#pragma once
// Small text helpers shared by label templates, the wizard and the
// question-label transform.

#include <string>
#include <string_view>
#include <vector>

namespace kgbb::text {

// A dynamic-label template is literal text interleaved with `{THEMATIC_LABEL}`
// placeholders.
struct TemplatePiece {
    bool placeholder = false;
    std::string value;

    friend bool operator==(const TemplatePiece&, const TemplatePiece&) = default;
};

std::vector<TemplatePiece> parse_label_template(std::string_view tmpl);
std::string join_template(const std::vector<TemplatePiece>& pieces);
std::vector<std::string> placeholders(std::string_view tmpl);

std::vector<std::string> split_words(std::string_view s);
std::string trim(std::string_view s);
// Collapses whitespace runs (including newlines) to one space and trims.
std::string collapse_spaces(std::string_view s);

// `has` -> `have`, `travels` -> `travel`, `carries` -> `carry`.
std::string base_form(std::string_view verb);

bool is_determiner(std::string_view word);

// {"travels", "to"} -> "travelsTo"
std::string camel_case(const std::vector<std::string>& words);
// "material entity" -> "MaterialEntity"
std::string pascal_case(std::string_view phrase);
// "has first name" -> "has-first-name"
std::string slug(std::string_view phrase);

std::string lower_first(std::string s);
std::string upper_first(std::string s);

bool starts_with_vowel_sound(std::string_view word);

} // namespace kgbb::text
