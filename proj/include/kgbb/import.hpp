#pragma once
// Tabular import: rows mapped through a KGBB import template become create
// requests. Rows are validated one by one; bad rows are reported and the
// rest still go through.

#include "kgbb/engine.hpp"

#include <map>
#include <string>
#include <vector>

namespace kgbb {

using Row = std::map<std::string, std::string>;

struct RowDiagnostic {
    std::size_t row = 0;  // 0-based data row
    std::string column;
    std::string message;
};

struct ImportResult {
    std::vector<CreateRequest> requests;
    std::vector<std::size_t> accepted_rows;
    std::vector<RowDiagnostic> diagnostics;
};

// Finds the template among the import templates of the instance's class.
const ImportTemplate& find_import_template(const Specification& spec, const Upri& kgbb_instance, const Upri& tmpl);

// `provenance.imported_from` defaults to the template IRI.
ImportResult apply_import_template(const Specification& spec, const Upri& kgbb_instance, const std::vector<Row>& rows,
                                   const ImportTemplate& tmpl, Provenance provenance);

// RFC 4180 reading and writing.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string write_csv(const std::vector<std::vector<std::string>>& rows);
// First record is the header.
std::vector<Row> csv_rows(std::string_view text);

} // namespace kgbb
