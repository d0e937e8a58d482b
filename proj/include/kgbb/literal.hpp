#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace kgbb {

enum class Datatype { string, integer, float_, boolean, date, date_time };

std::string_view to_string(Datatype dt);
std::optional<Datatype> datatype_from_string(std::string_view text);

// xsd IRI used when a literal is written as RDF.
std::string_view xsd_iri(Datatype dt);
std::optional<Datatype> datatype_from_xsd(std::string_view iri);

struct Literal {
    std::string value;
    Datatype datatype = Datatype::string;

    friend bool operator==(const Literal&, const Literal&) = default;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

// True when `value` is a lexical form of `dt`. Dates accept ISO 8601
// (`2019-08-05`, RFC 3339 date-times) and the long English form
// `5th of August 2019`.
bool literal_is_valid(std::string_view value, Datatype dt);

std::optional<double> literal_numeric(const Literal& lit);
std::optional<int> literal_year(const Literal& lit);

// date and date_time values are interchangeable for constraint checks.
bool datatypes_compatible(Datatype a, Datatype b);

} // namespace kgbb
