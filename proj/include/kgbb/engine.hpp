#pragma once
// The engine: validated CRUD over semantic units with cascades, provenance,
// soft-delete, versioning and derived compound structure.
//
// Mutations run against a private copy of the store and are published only
// on success, so a failed call never leaves partial writes behind. Readers
// take immutable snapshots.

#include "kgbb/model.hpp"
#include "kgbb/spec.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace kgbb {

struct Provenance {
    Upri creator;
    std::optional<Upri> application;
    std::optional<Upri> imported_from;
    std::optional<Timestamp> import_date;
};

// A resource named in a request. An IRI already known to the store (or a
// unit IRI, or a class of the loaded ontology) is reused; otherwise `kind`
// must be given and a new resource is registered (minting an IRI when
// `upri` is empty).
struct ResourceRef {
    Upri upri;
    std::optional<ResourceKind> kind;
    std::optional<Upri> class_affiliation;
    std::string label;

    static ResourceRef existing(Upri u) { return {std::move(u), std::nullopt, std::nullopt, {}}; }
    static ResourceRef make(ResourceKind k, std::optional<Upri> cls, std::string label, Upri u = {}) {
        return {std::move(u), k, std::move(cls), std::move(label)};
    }
};

// Literal inputs carry their lexical value; the datatype comes from the
// position class.
using InputValue = std::variant<ResourceRef, Literal>;

struct CreateRequest {
    Upri kgbb_instance;
    std::optional<ResourceRef> subject;
    std::map<Upri, InputValue> inputs;
    Provenance provenance;
    std::optional<Category> category_choice;
    bool negated = false;
    // Units demanded by min_count nodes, matched by kgbb_instance.
    std::vector<CreateRequest> cascade_inputs;

    std::optional<Upri> license;
    std::optional<Upri> access_restricted_to;
    std::optional<Upri> logical_framework;
    std::optional<Upri> confidence_level;
    std::optional<Timestamp> validity_start_date;
    std::optional<Timestamp> validity_end_date;
    std::set<Upri> references;
    std::set<Upri> object_described_by_semantic_unit;
    std::optional<Upri> data_production_metadata;
    std::set<Upri> dataset_unit_ids;
    bool editable = true;
};

// Materialized view of one unit. For versioned reads the fields that keep
// changing after the version was taken (current flags, version lists,
// deletion stamps) are normalized so the view never changes.
struct UnitView {
    SemanticUnit unit;
    std::vector<Triple> data_graph;
    std::optional<Upri> version;
};

struct History {
    Upri unit;
    std::vector<ObjectPositionInstance> position_events;  // creation order
    std::vector<VersionNode> versions;                   // oldest first
    std::optional<Upri> deleted_by;
    std::optional<Timestamp> deletion_date;
};

struct DerivedCompound {
    CompoundKind kind = CompoundKind::item;
    std::optional<Upri> root;
    std::set<Upri> members;
};

struct DynamicMetadata {
    std::set<Upri> contributors;
    Timestamp last_updated;
    std::optional<Upri> copyright_license;
    std::set<Upri> access_restrictions;
    std::set<Upri> logical_frameworks;
    std::set<Upri> imported_from;
};

struct EngineOptions {
    // Must return RFC 3339 UTC timestamps; the engine forces strict increase.
    std::function<Timestamp()> clock;
    std::function<Upri()> mint;
    // Seed for the default IRI minter; random when unset.
    std::optional<std::uint64_t> seed;
};

// ---- pure reads over a snapshot ------------------------------------------

UnitView read_unit(const Specification& spec, const Store& store, const Upri& unit,
                   const std::optional<Upri>& version = std::nullopt, bool include_deleted = false);
History history(const Store& store, const Upri& unit);
DerivedCompound derive_compounds(const Specification& spec, const Store& store, const Upri& seed, CompoundKind kind);
std::vector<std::set<Upri>> derive_all_contexts(const Specification& spec, const Store& store);
DynamicMetadata aggregate_dynamic_metadata(const Specification& spec, const Store& store, const Upri& unit);
// Link nodes whose conditions the statement currently satisfies.
std::vector<LinkNode> available_links(const Specification& spec, const Store& store, const Upri& statement);
// Compound units listing `unit` as an associated member.
std::vector<Upri> compounds_containing(const Store& store, const Upri& unit);

std::string format_timestamp(std::int64_t micros_since_epoch);
std::int64_t now_micros();

class Engine {
public:
    explicit Engine(std::shared_ptr<const Specification> spec, Store initial = {}, EngineOptions options = {});

    const Specification& spec() const { return *spec_; }
    std::shared_ptr<const Specification> spec_ptr() const { return spec_; }
    std::shared_ptr<const Store> snapshot() const;

    // Dispatches on the instance's class kind.
    Upri create_unit(const CreateRequest& req);
    Upri create_statement_unit(const CreateRequest& req);
    Upri create_compound_unit(const CreateRequest& req);
    Upri add_associated_unit(const Upri& compound, const CreateRequest& req);
    Upri create_linked_unit(const Upri& statement, const CreateRequest& req);

    Upri update_object_position(const Upri& unit, const Upri& position_class, const InputValue& input,
                                const Provenance& provenance);
    void soft_delete(const Upri& unit, const Upri& user, bool cascade = false);
    Upri create_version(const Upri& unit, const Upri& user);

    Upri add_question(QuestionUnit q, const Provenance& provenance);
    Upri add_compound_question(CompoundQuestionUnit q, const Provenance& provenance);

    // Swaps in a whole store (used when loading persisted data).
    void replace_store(Store s);

    UnitView read_unit(const Upri& unit, const std::optional<Upri>& version = std::nullopt,
                       bool include_deleted = false) const;

private:
    struct Txn;

    template <class F>
    auto mutate(F&& f);

    std::shared_ptr<const Specification> spec_;
    EngineOptions options_;
    std::set<Upri> reachable_;
    mutable std::mutex snapshot_mutex_;
    std::shared_ptr<const Store> store_;
    std::mutex writer_;
    std::int64_t last_micros_ = 0;
    std::function<Upri()> mint_;
};

} // namespace kgbb
