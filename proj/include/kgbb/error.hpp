#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgbb {

enum class ErrorCode {
    invalid_argument,
    not_found,
    parse_error,
    dangling_reference,
    taxonomy_cycle,
    constraint_widening,
    duplicate_label,
    choice_required,
    not_applicable,
    constraint_violation,
    missing_required_position,
    category_object_mismatch,
    cascade_underflow,
    max_count_exceeded,
    unit_locked,
    already_deleted,
    unknown_version,
    not_partial_order,
    incomparable_licenses,
    schema_mismatch,
    missing_required_binding,
    unknown_target,
    unmapped_required_position,
    binding_type_mismatch,
    unknown_instance,
    wizard_error,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
// `detail` names the offending item (position class, table, line:column, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string detail = {})
        : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace kgbb
