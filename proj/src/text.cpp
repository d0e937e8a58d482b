#include "kgbb/text.hpp"

#include "kgbb/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace kgbb::text {

std::vector<TemplatePiece> parse_label_template(std::string_view tmpl) {
    std::vector<TemplatePiece> out;
    std::string lit;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        const char c = tmpl[i];
        if (c == '}') throw Error(ErrorCode::parse_error, "unbalanced '}' in label template", std::string(tmpl));
        if (c != '{') {
            lit += c;
            continue;
        }
        const auto end = tmpl.find('}', i);
        if (end == std::string_view::npos)
            throw Error(ErrorCode::parse_error, "unterminated placeholder in label template", std::string(tmpl));
        const std::string name(tmpl.substr(i + 1, end - i - 1));
        if (name.empty() || name.find('{') != std::string::npos)
            throw Error(ErrorCode::parse_error, "malformed placeholder in label template", std::string(tmpl));
        if (!lit.empty()) out.push_back({false, std::move(lit)});
        lit.clear();
        out.push_back({true, name});
        i = end;
    }
    if (!lit.empty()) out.push_back({false, std::move(lit)});
    return out;
}

std::string join_template(const std::vector<TemplatePiece>& pieces) {
    std::string out;
    for (const auto& p : pieces) out += p.placeholder ? "{" + p.value + "}" : p.value;
    return out;
}

std::vector<std::string> placeholders(std::string_view tmpl) {
    std::vector<std::string> out;
    for (const auto& p : parse_label_template(tmpl))
        if (p.placeholder) out.push_back(p.value);
    return out;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string collapse_spaces(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = true;
            continue;
        }
        if (space && !out.empty()) out += ' ';
        space = false;
        out += c;
    }
    return out;
}

std::string base_form(std::string_view verb) {
    static const std::map<std::string, std::string, std::less<>> irregular = {
        {"has", "have"}, {"is", "be"}, {"does", "do"}, {"goes", "go"}, {"was", "be"}, {"are", "be"},
    };
    if (auto it = irregular.find(verb); it != irregular.end()) return it->second;
    std::string v(verb);
    auto ends = [&](std::string_view suf) { return v.size() > suf.size() && v.compare(v.size() - suf.size(), suf.size(), suf) == 0; };
    if (ends("ies")) return v.substr(0, v.size() - 3) + "y";
    if (ends("sses") || ends("shes") || ends("ches") || ends("xes") || ends("zes")) return v.substr(0, v.size() - 2);
    if (ends("ss") || ends("us") || ends("is")) return v;
    if (ends("s")) return v.substr(0, v.size() - 1);
    return v;
}

bool is_determiner(std::string_view word) {
    std::string w(word);
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
    return w == "the" || w == "a" || w == "an" || w == "this" || w == "some" || w == "every";
}

std::string camel_case(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (w.empty()) continue;
        std::string part = w;
        std::transform(part.begin(), part.end(), part.begin(), [](unsigned char c) { return std::tolower(c); });
        out += out.empty() ? part : upper_first(part);
    }
    return out;
}

std::string pascal_case(std::string_view phrase) {
    std::string out;
    for (const auto& w : split_words(phrase)) out += upper_first(w);
    return out;
}

std::string slug(std::string_view phrase) {
    std::string out;
    for (const auto& w : split_words(phrase)) {
        if (!out.empty()) out += '-';
        for (unsigned char c : w) {
            if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
            else if (c == '_' || c == '-') out += '-';
        }
    }
    return out;
}

std::string lower_first(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

std::string upper_first(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

bool starts_with_vowel_sound(std::string_view word) {
    if (word.empty()) return false;
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(word[0])));
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

} // namespace kgbb::text
