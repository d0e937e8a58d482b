#include "kgbb/error.hpp"

#include <array>

namespace kgbb {

std::string_view to_string(ErrorCode code) {
    static constexpr std::array<std::string_view, 26> names = {
        "InvalidArgument",       "NotFound",          "ParseError",
        "DanglingReference",     "TaxonomyCycle",     "ConstraintWidening",
        "DuplicateLabel",        "ChoiceRequired",    "NotApplicable",
        "ConstraintViolation",   "MissingRequiredPosition", "CategoryObjectMismatch",
        "CascadeUnderflow",      "MaxCountExceeded",  "UnitLocked",
        "AlreadyDeleted",        "UnknownVersion",    "NotPartialOrder",
        "IncomparableLicenses",  "SchemaMismatch",    "MissingRequiredBinding",
        "TemplateReferencesUnknownTarget", "UnmappedRequiredPosition", "BindingTypeMismatch",
        "UnknownInstance",       "WizardError",
    };
    return names[static_cast<std::size_t>(code)];
}

} // namespace kgbb
