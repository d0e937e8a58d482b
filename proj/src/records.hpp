#pragma once
// Flat field records shared by the persistence codecs. Every stored entity
// (unit, position instance, resource, version) maps to field name ->
// values; each codec only decides how to lay records out.

#include "kgbb/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgbb::records {

enum class FieldType { iri, text, time, boolean, integer };

struct FieldInfo {
    FieldType type = FieldType::text;
    bool multi = false;
};

using Record = std::map<std::string, std::vector<std::string>>;

// Unknown names are single-valued text.
FieldInfo field_info(std::string_view name);
// label -> rdfs:label, types -> rdf:type, otherwise kgbb:<name>.
Upri field_predicate(std::string_view name);
std::string field_from_predicate(const Upri& predicate);

// Column order used by tabular layouts.
const std::vector<std::string>& unit_fields();
const std::vector<std::string>& position_fields();
const std::vector<std::string>& resource_fields();
const std::vector<std::string>& version_fields();

std::optional<std::string> get1(const Record& r, const std::string& name);

Record unit_record(const SemanticUnit& u);  // positions excluded
SemanticUnit unit_from_record(const Upri& id, const Record& r);

Record position_record(const ObjectPositionInstance& p);  // role excluded
ObjectPositionInstance position_from_record(const Upri& id, const Record& r, PositionRole role);

Record resource_record(const Resource& r);
Resource resource_from_record(const Upri& id, const Record& r);

Record version_record(const VersionNode& v);
VersionNode version_from_record(const Upri& id, const Record& r);

std::string_view role_name(PositionRole role);
PositionRole role_from_name(std::string_view name);

} // namespace kgbb::records
