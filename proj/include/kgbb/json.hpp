#pragma once
// JSON forms of requests, bindings, units and reports, shared by the
// HTTP service, the CLI and the persistence codecs.

#include "kgbb/engine.hpp"
#include "kgbb/query.hpp"
#include "kgbb/spec.hpp"
#include "kgbb/templates.hpp"

#include <nlohmann/json.hpp>

namespace kgbb {

using json = nlohmann::json;

json binding_to_json(const Binding& b);
Binding binding_from_json(const json& j);

json question_to_json(const QuestionUnit& q);
// Accepts {"kgbb": iri, "subject": binding?, "bindings": {position iri: binding}}.
QuestionUnit question_from_json(const json& j);

json object_to_json(const Object& o);
json position_to_json(const ObjectPositionInstance& p);
json meta_to_json(const SemanticUnitMeta& m);
json unit_to_json(const SemanticUnit& u);
json resource_to_json(const Resource& r);
json version_to_json(const VersionNode& v);

// Inputs: {"<position iri>": {"resource": iri, "kind"?, "class"?, "label"?} | {"literal": text}}.
// The subject uses the resource form.
CreateRequest create_request_from_json(const json& j, const Upri& creator);
InputValue input_from_json(const json& j);
ResourceRef resource_ref_from_json(const json& j);

json diagnostics_to_json(const std::vector<Diagnostic>& ds);
json mind_map_to_json(const MindMap& m);
json display_to_json(const DisplayDocument& d);
json access_output_to_json(const AccessOutput& a);
json history_to_json(const History& h);

// Form descriptor for a statement or compound KGBB instance: one field per
// position with thematic label, required flag and constraint text.
json form_descriptor(const Specification& spec, const Upri& kgbb_instance);

json spec_summary(const Specification& spec);

} // namespace kgbb
