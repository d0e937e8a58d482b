#include "kgbb/literal.hpp"

#include <array>
#include <charconv>
#include <regex>

namespace kgbb {

namespace {

constexpr std::array<std::string_view, 6> kNames = {"string", "integer", "float", "boolean", "date", "date-time"};
constexpr std::array<std::string_view, 6> kXsd = {
    "http://www.w3.org/2001/XMLSchema#string",  "http://www.w3.org/2001/XMLSchema#integer",
    "http://www.w3.org/2001/XMLSchema#float",   "http://www.w3.org/2001/XMLSchema#boolean",
    "http://www.w3.org/2001/XMLSchema#date",    "http://www.w3.org/2001/XMLSchema#dateTime",
};

constexpr std::array<std::string_view, 12> kMonths = {"January", "February", "March",     "April",   "May",      "June",
                                                      "July",    "August",   "September", "October", "November", "December"};

int days_in_month(int year, int month) {
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && ((year % 4 == 0 && year % 100 != 0) || year % 400 == 0)) return 29;
    return days[month - 1];
}

bool valid_ymd(int y, int m, int d) { return m >= 1 && m <= 12 && d >= 1 && d <= days_in_month(y, m); }

int to_int(const std::string& s) { return std::stoi(s); }

bool iso_date(const std::string& s) {
    static const std::regex re(R"(^(\d{4})-(\d{2})-(\d{2})$)");
    std::smatch m;
    return std::regex_match(s, m, re) && valid_ymd(to_int(m[1]), to_int(m[2]), to_int(m[3]));
}

bool iso_date_time(const std::string& s) {
    static const std::regex re(R"(^(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})(\.\d+)?(Z|[+-]\d{2}:\d{2})$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) return false;
    return valid_ymd(to_int(m[1]), to_int(m[2]), to_int(m[3])) && to_int(m[4]) < 24 && to_int(m[5]) < 60 &&
           to_int(m[6]) < 61;
}

// "5th of August 2019"
std::optional<int> long_date_year(const std::string& s) {
    static const std::regex re(R"(^(\d{1,2})(st|nd|rd|th) of ([A-Z][a-z]+) (\d{4})$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) return std::nullopt;
    int month = 0;
    for (std::size_t i = 0; i < kMonths.size(); ++i)
        if (m[3].str() == kMonths[i]) month = static_cast<int>(i) + 1;
    const int year = to_int(m[4]);
    if (month == 0 || !valid_ymd(year, month, to_int(m[1]))) return std::nullopt;
    return year;
}

} // namespace

std::string_view to_string(Datatype dt) { return kNames[static_cast<std::size_t>(dt)]; }

std::optional<Datatype> datatype_from_string(std::string_view text) {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == text) return static_cast<Datatype>(i);
    if (text == "datetime" || text == "date_time" || text == "dateTime") return Datatype::date_time;
    if (text == "decimal" || text == "double") return Datatype::float_;
    if (text == "text") return Datatype::string;
    for (std::size_t i = 0; i < kXsd.size(); ++i)
        if (text == std::string("xsd:") + std::string(kXsd[i].substr(kXsd[i].find('#') + 1))) return static_cast<Datatype>(i);
    return std::nullopt;
}

std::string_view xsd_iri(Datatype dt) { return kXsd[static_cast<std::size_t>(dt)]; }

std::optional<Datatype> datatype_from_xsd(std::string_view iri) {
    for (std::size_t i = 0; i < kXsd.size(); ++i)
        if (kXsd[i] == iri) return static_cast<Datatype>(i);
    return std::nullopt;
}

bool literal_is_valid(std::string_view value, Datatype dt) {
    const std::string s(value);
    switch (dt) {
    case Datatype::string:
        return true;
    case Datatype::integer: {
        static const std::regex re(R"(^[+-]?\d+$)");
        return std::regex_match(s, re);
    }
    case Datatype::float_: {
        static const std::regex re(R"(^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$)");
        return std::regex_match(s, re);
    }
    case Datatype::boolean:
        return s == "true" || s == "false" || s == "1" || s == "0";
    case Datatype::date:
        return iso_date(s) || long_date_year(s).has_value();
    case Datatype::date_time:
        return iso_date_time(s) || iso_date(s) || long_date_year(s).has_value();
    }
    return false;
}

std::optional<double> literal_numeric(const Literal& lit) {
    if (lit.datatype != Datatype::integer && lit.datatype != Datatype::float_) return std::nullopt;
    if (!literal_is_valid(lit.value, lit.datatype)) return std::nullopt;
    try {
        return std::stod(lit.value);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<int> literal_year(const Literal& lit) {
    if (lit.datatype != Datatype::date && lit.datatype != Datatype::date_time) return std::nullopt;
    if (iso_date(lit.value) || iso_date_time(lit.value)) return std::stoi(lit.value.substr(0, 4));
    return long_date_year(lit.value);
}

bool datatypes_compatible(Datatype a, Datatype b) {
    auto temporal = [](Datatype d) { return d == Datatype::date || d == Datatype::date_time; };
    return a == b || (temporal(a) && temporal(b));
}

} // namespace kgbb
