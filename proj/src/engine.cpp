#include "kgbb/engine.hpp"

#include "kgbb/error.hpp"
#include "kgbb/query.hpp"
#include "kgbb/templates.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <deque>
#include <random>
#include <regex>

namespace kgbb {

std::string format_timestamp(std::int64_t micros) {
    const std::time_t secs = static_cast<std::time_t>(micros / 1000000);
    const auto frac = static_cast<long>(micros % 1000000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%06ldZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec, frac);
    return buf;
}

std::int64_t now_micros() {
    using namespace std::chrono;
    return duration_cast<microseconds>(system_clock::now().time_since_epoch()).count();
}

namespace {

std::function<Upri()> uuid_minter(std::optional<std::uint64_t> seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed ? *seed : std::random_device{}());
    auto mu = std::make_shared<std::mutex>();
    return [rng, mu] {
        std::uint64_t hi, lo;
        {
            std::lock_guard lock(*mu);
            hi = (*rng)();
            lo = (*rng)();
        }
        hi = (hi & 0xFFFFFFFFFFFF0FFFULL) | 0x0000000000004000ULL;
        lo = (lo & 0x3FFFFFFFFFFFFFFFULL) | 0x8000000000000000ULL;
        char buf[64];
        std::snprintf(buf, sizeof buf, "urn:kgbb:%08llx-%04llx-%04llx-%04llx-%012llx",
                      static_cast<unsigned long long>(hi >> 32), static_cast<unsigned long long>((hi >> 16) & 0xFFFF),
                      static_cast<unsigned long long>(hi & 0xFFFF), static_cast<unsigned long long>(lo >> 48),
                      static_cast<unsigned long long>(lo & 0xFFFFFFFFFFFFULL));
        return Upri(buf);
    };
}

const Upri& negation_unit_class() {
    static const Upri u = vocab::term("NegationUnit");
    return u;
}

bool is_item_kind(CompoundKind k) {
    return k == CompoundKind::item || k == CompoundKind::instance_item || k == CompoundKind::class_item;
}

// Class whose extension the resource belongs to, used by constraint checks.
std::optional<Upri> effective_class(const Resource& r) {
    if (r.kind == ResourceKind::class_) return r.upri;
    return r.class_affiliation;
}

std::set<Upri> reachable_instances(const Specification& spec) {
    std::set<Upri> out;
    if (spec.graph.data_entry_starting_points.empty()) {
        for (const auto& [i, _] : spec.graph.kgbb_instances) out.insert(i);
        return out;
    }
    std::deque<Upri> todo(spec.graph.data_entry_starting_points.begin(), spec.graph.data_entry_starting_points.end());
    while (!todo.empty()) {
        auto cur = todo.front();
        todo.pop_front();
        if (!out.insert(cur).second) continue;
        for (const auto& a : spec.graph.association_nodes)
            if (a.source == cur) todo.push_back(a.target);
        for (const auto& l : spec.graph.link_nodes)
            if (l.linking == cur) todo.push_back(l.target);
        for (const auto& r : spec.graph.reference_nodes)
            if (r.source == cur) todo.push_back(r.target);
    }
    return out;
}

// Resource (or unit) at a statement's position, if current and resource-valued.
std::optional<Upri> current_resource(const StatementUnit& s, const Upri& pc) {
    const auto* p = s.current(pc);
    if (!p || !p->is_resource()) return std::nullopt;
    return std::get<Upri>(p->input);
}

bool link_condition_holds(const Specification& spec, const Store& store, const StatementUnit& s, const LinkNode& l) {
    const auto obj = current_resource(s, l.use_as_subject);
    if (!obj) return false;
    if (!l.if_object) return true;
    if (*obj == *l.if_object) return true;
    const auto* r = store.resource(*obj);
    if (!r) return false;
    const auto cls = effective_class(*r);
    return cls && spec.ontology.is_subclass_of(*cls, *l.if_object);
}

} // namespace

// ---- reads ----------------------------------------------------------------

std::vector<Upri> compounds_containing(const Store& store, const Upri& unit) {
    std::vector<Upri> out;
    for (const auto& [id, u] : store.units)
        if (const auto* c = std::get_if<CompoundUnit>(&u); c && c->has_associated_semantic_unit.count(unit))
            out.push_back(id);
    return out;
}

std::vector<LinkNode> available_links(const Specification& spec, const Store& store, const Upri& statement) {
    const auto* s = store.statement(statement);
    if (!s) throw Error(ErrorCode::not_found, "no such statement unit", statement.value);
    std::vector<LinkNode> out;
    for (const auto* l : spec.links_from(s->meta.kgbb_uri))
        if (link_condition_holds(spec, store, *s, *l)) out.push_back(*l);
    return out;
}

namespace {

void strip_volatile(std::vector<Triple>& triples) {
    static const Upri current = vocab::term("currentVersion");
    static const Upri version = vocab::term("versionID");
    triples.erase(std::remove_if(triples.begin(), triples.end(),
                                 [](const Triple& t) { return t.predicate == current || t.predicate == version; }),
                  triples.end());
}

void normalize_meta(SemanticUnitMeta& m) {
    m.version_ids.clear();
    m.deleted_by.reset();
    m.deletion_date.reset();
    m.editable = false;
}

UnitView read_impl(const Specification& spec, const Store& store, const Upri& id, const std::optional<Upri>& version,
                   bool include_deleted, std::set<Upri>& visiting) {
    const auto* u = store.find(id);
    if (!u) throw Error(ErrorCode::not_found, "no such unit", id.value);
    const auto& meta = meta_of(*u);
    if (version) {
        auto v = store.versions.find(*version);
        if (v == store.versions.end() || (v->second.of_unit != id && !meta.version_ids.count(*version)))
            throw Error(ErrorCode::unknown_version, "version does not belong to this unit", version->value);
    } else if (meta.deleted() && !include_deleted) {
        throw Error(ErrorCode::not_found, "unit is deleted", id.value);
    }

    UnitView view{*u, {}, version};
    if (auto* s = std::get_if<StatementUnit>(&view.unit)) {
        std::vector<ObjectPositionInstance> keep;
        for (const auto& p : s->positions) {
            if (version ? p.version_ids.count(*version) != 0 : p.current_version) keep.push_back(p);
        }
        s->positions = std::move(keep);
        if (version) {
            for (auto& p : s->positions) {
                p.current_version = true;
                p.version_ids.clear();
            }
            normalize_meta(s->meta);
            s->meta.label = render_dynamic_label(spec, store, *s);
        }
        view.data_graph = data_graph(*s);
        if (version) strip_volatile(view.data_graph);
    } else if (auto* c = std::get_if<CompoundUnit>(&view.unit)) {
        if (!visiting.insert(id).second) return view;
        std::set<Upri> members;
        for (const auto& m : c->has_associated_semantic_unit) {
            const auto* mu = store.find(m);
            if (!mu) continue;
            const auto& mm = meta_of(*mu);
            if (version ? mm.version_ids.count(*version) == 0 : mm.deleted()) continue;
            members.insert(m);
            auto sub = read_impl(spec, store, m, version, true, visiting);
            view.data_graph.insert(view.data_graph.end(), sub.data_graph.begin(), sub.data_graph.end());
        }
        c->has_associated_semantic_unit = members;
        if (version) {
            std::map<Upri, std::size_t> ordering;
            for (const auto& [m, i] : c->ordering)
                if (members.count(m)) ordering[m] = i;
            c->ordering = ordering;
            normalize_meta(c->meta);
        }
        visiting.erase(id);
    }
    return view;
}

} // namespace

UnitView read_unit(const Specification& spec, const Store& store, const Upri& unit, const std::optional<Upri>& version,
                   bool include_deleted) {
    std::set<Upri> visiting;
    return read_impl(spec, store, unit, version, include_deleted, visiting);
}

History history(const Store& store, const Upri& unit) {
    const auto* u = store.find(unit);
    if (!u) throw Error(ErrorCode::not_found, "no such unit", unit.value);
    History h;
    h.unit = unit;
    if (const auto* s = std::get_if<StatementUnit>(u)) {
        h.position_events = s->positions;
        std::sort(h.position_events.begin(), h.position_events.end(), position_order);
    }
    auto chain = version_chain(store, unit);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) h.versions.push_back(store.versions.at(*it));
    h.deleted_by = meta_of(*u).deleted_by;
    h.deletion_date = meta_of(*u).deletion_date;
    return h;
}

namespace {

bool derivable(const Specification&, const StatementUnit& s) {
    return !s.meta.deleted() && !builtin::classes().count(s.meta.kgbb_uri);
}

std::vector<Upri> resource_objects(const StatementUnit& s) {
    std::vector<Upri> out;
    for (const auto& p : s.positions)
        if (p.current_version && p.is_resource()) out.push_back(std::get<Upri>(p.input));
    return out;
}

bool is_about(const Specification& spec, const StatementUnit& s) {
    const auto* cls = spec.statement_class_of_instance(s.meta.kgbb_uri);
    if (!cls || !cls->predicate) return false;
    const auto& v = cls->predicate->value;
    return v.size() >= 11 && v.compare(v.size() - 11, 11, "IAO_0000136") == 0;
}

std::set<Upri> item_members(const Specification& spec, const Store& store, const Upri& subject) {
    std::set<Upri> out;
    for (const auto& [id, u] : store.units)
        if (const auto* s = std::get_if<StatementUnit>(&u); s && derivable(spec, *s) && s->subject() == subject)
            out.insert(id);
    return out;
}

const ObjectPositionClass* transitive_position(const Specification& spec, const Upri& kgbb) {
    const auto* cls = spec.statement_class_of_instance(kgbb);
    if (!cls) return nullptr;
    for (const auto& p : cls->positions)
        if (p.object_type == ObjectType::resource && p.logical_properties.count(LogicalProperty::transitive)) return &p;
    return nullptr;
}

DerivedCompound granularity_tree(const Specification& spec, const Store& store, const Upri& seed) {
    // Determine the relation and a starting resource.
    Upri kgbb;
    Upri start;
    if (const auto* s = store.statement(seed)) {
        kgbb = s->meta.kgbb_uri;
        start = s->subject();
    } else {
        start = seed;
        for (const auto& [id, u] : store.units) {
            const auto* s2 = std::get_if<StatementUnit>(&u);
            if (s2 && derivable(spec, *s2) && s2->subject() == seed && transitive_position(spec, s2->meta.kgbb_uri)) {
                kgbb = s2->meta.kgbb_uri;
                break;
            }
        }
        // A leaf part: some statement names the seed at its transitive position.
        if (kgbb.empty()) {
            for (const auto& [id, u] : store.units) {
                const auto* s2 = std::get_if<StatementUnit>(&u);
                if (!s2 || !derivable(spec, *s2)) continue;
                const auto* pos = transitive_position(spec, s2->meta.kgbb_uri);
                if (pos && current_resource(*s2, pos->upri) == seed) {
                    kgbb = s2->meta.kgbb_uri;
                    break;
                }
            }
        }
    }
    if (kgbb.empty())
        throw Error(ErrorCode::not_partial_order, "no statement about the seed to build a granularity tree from", seed.value);
    const auto* pos = transitive_position(spec, kgbb);
    if (!pos) throw Error(ErrorCode::not_partial_order, "predicate position is not declared transitive", kgbb.value);

    // parent resource -> (unit, child resource)
    std::multimap<Upri, std::pair<Upri, Upri>> down;
    std::multimap<Upri, Upri> up;  // child -> parent
    for (const auto& [id, u] : store.units) {
        const auto* s = std::get_if<StatementUnit>(&u);
        if (!s || !derivable(spec, *s) || s->meta.kgbb_uri != kgbb || s->negated) continue;
        const auto obj = current_resource(*s, pos->upri);
        if (!obj) continue;
        down.emplace(s->subject(), std::make_pair(id, *obj));
        up.emplace(*obj, s->subject());
    }

    Upri root = start;
    std::set<Upri> seen{root};
    for (;;) {
        auto it = up.find(root);
        if (it == up.end()) break;
        root = it->second;
        if (!seen.insert(root).second) throw Error(ErrorCode::not_partial_order, "cycle in partonomy", root.value);
    }

    DerivedCompound out;
    out.kind = CompoundKind::granularity_tree;
    out.root = root;
    std::set<Upri> visited{root};
    std::vector<Upri> todo{root};
    while (!todo.empty()) {
        auto cur = todo.back();
        todo.pop_back();
        auto [b, e] = down.equal_range(cur);
        for (auto it = b; it != e; ++it) {
            out.members.insert(it->second.first);
            if (!visited.insert(it->second.second).second)
                throw Error(ErrorCode::not_partial_order, "cycle or shared part in granularity tree", it->second.second.value);
            todo.push_back(it->second.second);
        }
    }
    return out;
}

// Union-find over resources joined by statements; is-about statements only
// attach to their subject.
std::map<Upri, std::set<Upri>> context_components(const Specification& spec, const Store& store) {
    std::map<Upri, Upri> parent;
    std::function<Upri(const Upri&)> find = [&](const Upri& x) -> Upri {
        auto it = parent.find(x);
        if (it == parent.end()) {
            parent[x] = x;
            return x;
        }
        if (it->second == x) return x;
        auto r = find(it->second);
        parent[x] = r;
        return r;
    };
    auto unite = [&](const Upri& a, const Upri& b) {
        auto ra = find(a), rb = find(b);
        if (ra != rb) parent[ra] = rb;
    };
    std::vector<std::pair<Upri, Upri>> unit_subject;
    for (const auto& [id, u] : store.units) {
        const auto* s = std::get_if<StatementUnit>(&u);
        if (!s || !derivable(spec, *s)) continue;
        find(s->subject());
        unit_subject.emplace_back(id, s->subject());
        if (is_about(spec, *s)) continue;
        for (const auto& o : resource_objects(*s)) unite(s->subject(), o);
    }
    std::map<Upri, std::set<Upri>> out;
    for (const auto& [unit, subject] : unit_subject) out[find(subject)].insert(unit);
    return out;
}

} // namespace

std::vector<std::set<Upri>> derive_all_contexts(const Specification& spec, const Store& store) {
    std::vector<std::set<Upri>> out;
    for (auto& [_, members] : context_components(spec, store)) out.push_back(members);
    return out;
}

DerivedCompound derive_compounds(const Specification& spec, const Store& store, const Upri& seed, CompoundKind kind) {
    if (!store.find(seed) && !store.resource(seed)) {
        bool used = false;
        for (const auto& [_, u] : store.units)
            if (const auto* s = std::get_if<StatementUnit>(&u); s && s->subject() == seed) used = true;
        if (!used) throw Error(ErrorCode::not_found, "unknown seed", seed.value);
    }
    const auto* seed_statement = store.statement(seed);
    const Upri subject = seed_statement ? seed_statement->subject() : seed;

    DerivedCompound out;
    out.kind = kind;
    switch (kind) {
    case CompoundKind::item:
    case CompoundKind::instance_item:
    case CompoundKind::class_item:
        out.root = subject;
        out.members = item_members(spec, store, subject);
        if (seed_statement && !out.members.count(seed)) out.members.insert(seed);
        return out;
    case CompoundKind::item_group: {
        out.root = subject;
        std::set<Upri> subjects{subject};
        std::vector<Upri> todo{subject};
        while (!todo.empty()) {
            auto cur = todo.back();
            todo.pop_back();
            for (const auto& [id, u] : store.units) {
                const auto* s = std::get_if<StatementUnit>(&u);
                if (!s || !derivable(spec, *s)) continue;
                const auto objs = resource_objects(*s);
                if (s->subject() == cur) {
                    for (const auto& o : objs)
                        if (!item_members(spec, store, o).empty() && subjects.insert(o).second) todo.push_back(o);
                } else if (std::find(objs.begin(), objs.end(), cur) != objs.end()) {
                    if (subjects.insert(s->subject()).second) todo.push_back(s->subject());
                }
            }
        }
        for (const auto& s : subjects)
            for (const auto& m : item_members(spec, store, s)) out.members.insert(m);
        return out;
    }
    case CompoundKind::granularity_tree:
        return granularity_tree(spec, store, seed);
    case CompoundKind::granular_item_group: {
        auto tree = granularity_tree(spec, store, seed);
        out.root = tree.root;
        std::set<Upri> subjects;
        if (tree.root) subjects.insert(*tree.root);
        for (const auto& m : tree.members)
            if (const auto* s = store.statement(m))
                for (const auto& o : resource_objects(*s)) subjects.insert(o);
        for (const auto& s : subjects)
            for (const auto& m : item_members(spec, store, s)) out.members.insert(m);
        return out;
    }
    case CompoundKind::context: {
        for (auto& [_, members] : context_components(spec, store)) {
            bool hit = members.count(seed) != 0;
            for (const auto& m : members)
                if (store.statement(m)->subject() == subject) hit = true;
            if (hit) {
                out.members = members;
                break;
            }
        }
        return out;
    }
    case CompoundKind::dataset:
    case CompoundKind::list:
        break;
    }
    throw Error(ErrorCode::not_applicable, "dataset and list units are curated, not derived", std::string(to_string(kind)));
}

DynamicMetadata aggregate_dynamic_metadata(const Specification& spec, const Store& store, const Upri& unit) {
    if (!store.find(unit)) throw Error(ErrorCode::not_found, "no such unit", unit.value);
    DynamicMetadata out;
    std::set<Upri> licenses;
    std::set<Upri> seen;
    std::vector<Upri> todo{unit};
    while (!todo.empty()) {
        auto cur = todo.back();
        todo.pop_back();
        if (!seen.insert(cur).second) continue;
        const auto* u = store.find(cur);
        if (!u) continue;
        if (const auto* c = std::get_if<CompoundUnit>(u)) {
            out.contributors.insert(c->meta.creator);
            out.last_updated = std::max(out.last_updated, c->meta.creation_date);
            for (const auto& m : c->has_associated_semantic_unit)
                if (const auto* mu = store.find(m); mu && !meta_of(*mu).deleted()) todo.push_back(m);
            continue;
        }
        const auto* s = std::get_if<StatementUnit>(u);
        if (!s) continue;
        for (const auto& p : s->positions) {
            if (!p.current_version) continue;
            out.contributors.insert(p.creator);
            out.last_updated = std::max(out.last_updated, p.creation_date);
            if (p.imported_from) out.imported_from.insert(*p.imported_from);
        }
        licenses.insert(s->license);
        if (s->access_restricted_to) out.access_restrictions.insert(*s->access_restricted_to);
        out.logical_frameworks.insert(s->logical_framework);
        if (s->meta.imported_from) out.imported_from.insert(*s->meta.imported_from);
    }
    if (!licenses.empty()) out.copyright_license = spec.licenses.most_restrictive(licenses);
    return out;
}

// ---- engine ---------------------------------------------------------------

struct Engine::Txn {
    Engine& engine;
    const Specification& spec;
    Store work;

    struct Resolved {
        Upri upri;
        std::optional<ResourceKind> kind;  // unset for a unit used as a resource
        std::optional<Upri> cls;
        bool is_new = false;
    };

    std::vector<Resolved> new_resources;

    Timestamp now() {
        auto t = engine.options_.clock ? engine.options_.clock() : format_timestamp(now_micros());
        // Strictly increasing: bump by a microsecond past the previous stamp if needed.
        std::int64_t micros = 0;
        {
            std::tm tm{};
            int frac = 0;
            if (std::sscanf(t.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%6dZ", &tm.tm_year, &tm.tm_mon, &tm.tm_mday, &tm.tm_hour,
                            &tm.tm_min, &tm.tm_sec, &frac) >= 6) {
                tm.tm_year -= 1900;
                tm.tm_mon -= 1;
                micros = static_cast<std::int64_t>(timegm(&tm)) * 1000000 + frac;
            }
        }
        if (micros <= engine.last_micros_) micros = engine.last_micros_ + 1;
        engine.last_micros_ = micros;
        return format_timestamp(micros);
    }

    Upri mint() {
        for (;;) {
            auto u = engine.mint_();
            if (!work.find(u) && !work.resources.count(u) && !work.versions.count(u)) return u;
        }
    }

    Upri application(const Provenance& p) const { return p.application ? *p.application : spec.application.upri; }

    Resolved resolve(const ResourceRef& ref) {
        if (!ref.upri.empty()) {
            if (const auto* r = work.resource(ref.upri)) {
                if (ref.kind && *ref.kind != r->kind)
                    throw Error(ErrorCode::invalid_argument, "resource already exists with a different kind", ref.upri.value);
                return {r->upri, r->kind, effective_class(*r), false};
            }
            if (work.find(ref.upri)) return {ref.upri, std::nullopt, std::nullopt, false};
        }
        if (ref.kind) {
            if (*ref.kind == ResourceKind::property)
                throw Error(ErrorCode::invalid_argument, "property resources cannot be used here", ref.upri.value);
            Resource r;
            r.upri = ref.upri.empty() ? mint() : ref.upri;
            if (!is_valid_upri(r.upri.value)) throw Error(ErrorCode::invalid_argument, "invalid IRI", r.upri.value);
            r.kind = *ref.kind;
            r.class_affiliation = ref.class_affiliation;
            r.label = ref.label;
            if (r.kind == ResourceKind::class_ && r.label.empty()) r.label = spec.ontology.label_of(r.upri);
            work.resources[r.upri] = r;
            Resolved out{r.upri, r.kind, effective_class(r), true};
            new_resources.push_back(out);
            return out;
        }
        if (!ref.upri.empty() && spec.ontology.contains(ref.upri)) return register_class(ref.upri);
        throw Error(ErrorCode::not_found, "unknown resource; give its kind to create it", ref.upri.value);
    }

    Resolved register_class(const Upri& cls) {
        if (const auto* r = work.resource(cls)) return {r->upri, r->kind, effective_class(*r), false};
        Resource r;
        r.upri = cls;
        r.kind = ResourceKind::class_;
        r.label = spec.ontology.label_of(cls);
        if (const auto* oc = spec.ontology.find(cls); oc && !oc->parents.empty()) r.class_affiliation = oc->parents.front();
        work.resources[cls] = r;
        return {cls, ResourceKind::class_, cls, false};
    }

    Resolved resolved_existing(const Upri& u) {
        if (const auto* r = work.resource(u)) return {r->upri, r->kind, effective_class(*r), false};
        if (work.find(u)) return {u, std::nullopt, std::nullopt, false};
        throw Error(ErrorCode::not_found, "unknown resource", u.value);
    }

    void check_class(const Resolved& r, const Upri& required_class, const std::string& where) {
        if (!r.kind) throw Error(ErrorCode::constraint_violation, "a semantic unit cannot satisfy a class constraint (" +
                                                                      required_class.value + ")", where);
        if (!r.cls || !spec.ontology.is_subclass_of(*r.cls, required_class))
            throw Error(ErrorCode::constraint_violation,
                        "resource <" + r.upri.value + "> is not an instance of <" + required_class.value + ">", where);
    }

    Object check_input(const StatementKgbbClass& cls, const ObjectPositionClass& pos, const InputValue& in,
                       Category category, bool negated, bool builtin_class) {
        const std::string where = pos.upri.value;
        if (pos.object_type == ObjectType::literal) {
            const auto* lit = std::get_if<Literal>(&in);
            if (!lit) throw Error(ErrorCode::constraint_violation, "position expects a literal", where);
            const auto& lc = *pos.literal;
            Literal value{lit->value, lc.datatype};
            if (!literal_is_valid(value.value, lc.datatype))
                throw Error(ErrorCode::constraint_violation,
                            "'" + value.value + "' is not a valid " + std::string(to_string(lc.datatype)), where);
            if (lc.min || lc.max) {
                if (auto n = literal_numeric(value)) {
                    if (lc.min && *n < *lc.min)
                        throw Error(ErrorCode::constraint_violation, "value below minimum " + std::to_string(*lc.min), where);
                    if (lc.max && *n > *lc.max)
                        throw Error(ErrorCode::constraint_violation, "value above maximum " + std::to_string(*lc.max), where);
                }
            }
            if (lc.pattern && !std::regex_match(value.value, std::regex(*lc.pattern)))
                throw Error(ErrorCode::constraint_violation, "value does not match pattern " + *lc.pattern, where);
            return value;
        }
        const auto* ref = std::get_if<ResourceRef>(&in);
        if (!ref) throw Error(ErrorCode::constraint_violation, "position expects a resource", where);
        auto r = resolve(*ref);
        if (pos.resource_class) check_class(r, *pos.resource_class, where);
        if (!builtin_class && !cls.lexical && category != Category::lexical) {
            const auto kind = r.kind.value_or(ResourceKind::named_individual);
            auto allowed = allowed_object_resource_kinds(category);
            if (negated && category == Category::assertional) allowed.insert(ResourceKind::some_instance);
            if (!allowed.count(kind))
                throw Error(ErrorCode::category_object_mismatch,
                            std::string(to_string(category)) + " statements do not accept " + std::string(to_string(kind)) +
                                " objects",
                            where);
        }
        return r.upri;
    }

    SemanticUnitMeta new_meta(const Upri& kgbb, const Provenance& prov) {
        if (prov.creator.empty()) throw Error(ErrorCode::invalid_argument, "a creator is required");
        SemanticUnitMeta m;
        m.upri = mint();
        m.kgbb_uri = kgbb;
        m.creator = prov.creator;
        m.creation_date = now();
        m.created_with_application = application(prov);
        m.imported_from = prov.imported_from;
        m.import_date = prov.import_date;
        if (prov.imported_from && !m.import_date) m.import_date = m.creation_date;
        return m;
    }

    void relabel(const Upri& unit) {
        auto& s = std::get<StatementUnit>(work.units.at(unit));
        s.meta.label = render_dynamic_label(spec, work, s);
    }

    // Statement whose subject may be forced by an association or link.
    Upri new_statement(const CreateRequest& req, std::optional<Resolved> forced_subject,
                       const std::vector<std::pair<Upri, Upri>>& carry_over, std::optional<Upri> parent) {
        const auto* cls = spec.statement_class_of_instance(req.kgbb_instance);
        if (!cls) throw Error(ErrorCode::unknown_instance, "not a statement KGBB instance", req.kgbb_instance.value);
        const bool is_builtin = builtin::classes().count(req.kgbb_instance) != 0;

        Resolved subject;
        if (forced_subject) {
            if (req.subject && !req.subject->upri.empty() && req.subject->upri != forced_subject->upri)
                throw Error(ErrorCode::invalid_argument, "subject is fixed by the specification graph",
                            req.subject->upri.value);
            subject = *forced_subject;
        } else {
            if (!req.subject) throw Error(ErrorCode::invalid_argument, "a statement needs a subject", req.kgbb_instance.value);
            subject = resolve(*req.subject);
        }

        Category category;
        if (cls->lexical) category = Category::lexical;
        else if (!subject.kind) category = Category::assertional;
        else category = classify_category(*subject.kind, req.category_choice);

        if (cls->subject_constraint && subject.kind) check_class(subject, *cls->subject_constraint, "subject");

        if (!subject.kind) {
            // A unit as subject needs a reference node permitting it.
            const auto& source_kgbb = meta_of(*work.find(subject.upri)).kgbb_uri;
            const ReferenceNode* node = nullptr;
            for (const auto* r : spec.references_to(req.kgbb_instance))
                if (r->source == source_kgbb) node = r;
            if (!node)
                throw Error(ErrorCode::constraint_violation, "no reference node lets this KGBB describe that unit",
                            subject.upri.value);
            if (node->max_count != 0) {
                std::size_t n = 0;
                for (const auto& [id, u] : work.units)
                    if (const auto* s = std::get_if<StatementUnit>(&u);
                        s && !s->meta.deleted() && s->meta.kgbb_uri == req.kgbb_instance && s->subject() == subject.upri)
                        ++n;
                if (n + 1 > node->max_count)
                    throw Error(ErrorCode::max_count_exceeded, "reference node max_count reached", subject.upri.value);
            }
        }

        for (const auto& [pc, _] : req.inputs)
            if (!cls->position(pc)) throw Error(ErrorCode::invalid_argument, "unknown object position", pc.value);
        for (const auto& pos : cls->positions)
            if (pos.required && !req.inputs.count(pos.upri))
                throw Error(ErrorCode::missing_required_position, "required position " + pos.thematic_label + " missing",
                            pos.upri.value);

        StatementUnit unit;
        unit.meta = new_meta(req.kgbb_instance, req.provenance);
        unit.meta.subject = subject.upri;
        unit.meta.types = {cls->manages, category_class(category)};
        if (req.negated) unit.meta.types.insert(negation_unit_class());
        unit.meta.data_production_metadata = req.data_production_metadata;
        unit.meta.dataset_unit_ids = req.dataset_unit_ids;
        unit.meta.editable = req.editable;
        unit.category = category;
        unit.negated = req.negated;
        unit.object_described_by_semantic_unit = req.object_described_by_semantic_unit;
        unit.based_on_graph_pattern = cls->storage_model();
        unit.license = req.license ? *req.license : spec.application.default_license;
        unit.access_restricted_to = req.access_restricted_to;
        unit.logical_framework = req.logical_framework ? *req.logical_framework : spec.application.default_logical_framework;
        unit.confidence_level = req.confidence_level;
        unit.validity_start_date = req.validity_start_date;
        unit.validity_end_date = req.validity_end_date;
        if (unit.validity_start_date && unit.validity_end_date && *unit.validity_start_date > *unit.validity_end_date)
            throw Error(ErrorCode::invalid_argument, "validity period ends before it starts");
        unit.references = req.references;

        for (const auto& pos : cls->positions) {
            auto it = req.inputs.find(pos.upri);
            if (it == req.inputs.end()) continue;
            Object obj = check_input(*cls, pos, it->second, category, req.negated, is_builtin);
            for (const auto& [pc, constraint_class] : carry_over) {
                if (pc != pos.upri) continue;
                check_class(resolved_existing(std::get<Upri>(obj)), constraint_class, pos.upri.value);
                unit.constraint_nodes.insert({mint(), "instance of <" + constraint_class.value + ">", pos.upri});
            }
            unit.constraint_nodes.insert({mint(), describe_constraint(pos), pos.upri});
            ObjectPositionInstance inst;
            inst.upri = mint();
            inst.position_class = pos.upri;
            inst.role = pos.required ? PositionRole::required : PositionRole::optional;
            inst.input_type_label = pos.thematic_label;
            inst.input = std::move(obj);
            if (!pos.logical_properties.empty()) {
                for (auto lp : pos.logical_properties)
                    if (lp != LogicalProperty::functional) {
                        inst.logical_property = lp;
                        break;
                    }
            }
            inst.current_version = true;
            inst.creator = req.provenance.creator;
            inst.creation_date = now();
            inst.created_with_application = application(req.provenance);
            inst.imported_from = req.provenance.imported_from;
            unit.positions.push_back(std::move(inst));
        }

        const Upri id = unit.meta.upri;
        work.units.emplace(id, std::move(unit));
        relabel(id);

        fire_links(id, req, parent);
        return id;
    }

    // Creates link targets demanded by min_count, plus any explicitly
    // supplied cascade inputs for available links.
    void fire_links(const Upri& statement, const CreateRequest& req, std::optional<Upri> parent) {
        std::vector<bool> used(req.cascade_inputs.size(), false);
        for (const auto* l : spec.links_from(req.kgbb_instance)) {
            const auto& s = std::get<StatementUnit>(work.units.at(statement));
            if (!link_condition_holds(spec, work, s, *l)) continue;
            const Upri object = *current_resource(s, l->use_as_subject);
            std::vector<const CreateRequest*> asked;
            for (std::size_t i = 0; i < req.cascade_inputs.size(); ++i)
                if (!used[i] && req.cascade_inputs[i].kgbb_instance == l->target) {
                    asked.push_back(&req.cascade_inputs[i]);
                    used[i] = true;
                }
            if (l->max_count != 0 && asked.size() > l->max_count)
                throw Error(ErrorCode::max_count_exceeded, "more linked units than the link node allows", l->target.value);

            std::vector<Upri> linked;
            if (spec.compound_class_of_instance(l->target)) {
                if (asked.empty() && l->min_count > 0) {
                    if (auto existing = find_compound(l->target, object)) linked.push_back(*existing);
                    else {
                        CreateRequest auto_req;
                        auto_req.kgbb_instance = l->target;
                        auto_req.provenance = req.provenance;
                        linked.push_back(new_compound(auto_req, resolved_existing(object), std::nullopt));
                    }
                }
                for (const auto* r : asked) linked.push_back(new_compound(*r, resolved_existing(object), std::nullopt));
            } else {
                if (asked.size() < l->min_count)
                    throw Error(ErrorCode::cascade_underflow,
                                "link node requires " + std::to_string(l->min_count) + " unit(s) of " + l->target.value,
                                l->target.value);
                for (const auto* r : asked)
                    linked.push_back(new_statement(*r, resolved_existing(object), {}, std::nullopt));
            }
            if (parent)
                for (const auto& u : linked) std::get<CompoundUnit>(work.units.at(*parent)).has_linked_semantic_unit.insert(u);
        }
        for (std::size_t i = 0; i < used.size(); ++i)
            if (!used[i])
                throw Error(ErrorCode::invalid_argument, "cascade input does not match any applicable link node",
                            req.cascade_inputs[i].kgbb_instance.value);
    }

    std::optional<Upri> find_compound(const Upri& kgbb, const Upri& subject) const {
        for (const auto& [id, u] : work.units)
            if (const auto* c = std::get_if<CompoundUnit>(&u);
                c && !c->meta.deleted() && c->meta.kgbb_uri == kgbb && c->meta.subject == subject)
                return id;
        return std::nullopt;
    }

    Upri new_compound(const CreateRequest& req, std::optional<Resolved> forced_subject, std::optional<Upri> parent) {
        const auto* cls = spec.compound_class_of_instance(req.kgbb_instance);
        if (!cls) throw Error(ErrorCode::unknown_instance, "not a compound KGBB instance", req.kgbb_instance.value);
        if (!req.inputs.empty())
            throw Error(ErrorCode::invalid_argument, "compound units take no position inputs", req.kgbb_instance.value);

        std::optional<Resolved> subject = forced_subject;
        if (!subject && req.subject) subject = resolve(*req.subject);
        if (!subject && is_item_kind(cls->kind))
            throw Error(ErrorCode::invalid_argument, "item units need a subject", req.kgbb_instance.value);
        if (subject && cls->subject_constraint && subject->kind) check_class(*subject, *cls->subject_constraint, "subject");

        CompoundUnit unit;
        unit.meta = new_meta(req.kgbb_instance, req.provenance);
        if (subject) unit.meta.subject = subject->upri;
        unit.meta.types = {compound_kind_class(cls->kind), Upri(cls->upri.value + "#unit-class")};
        unit.meta.data_production_metadata = req.data_production_metadata;
        unit.meta.dataset_unit_ids = req.dataset_unit_ids;
        unit.meta.editable = req.editable;
        unit.kind = cls->kind;
        unit.meta.label = cls->label + (subject ? ": " + resource_label(spec, work, subject->upri) : std::string());
        const Upri id = unit.meta.upri;
        work.units.emplace(id, std::move(unit));

        std::vector<bool> used(req.cascade_inputs.size(), false);
        for (const auto* a : spec.associations_from(req.kgbb_instance)) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < req.cascade_inputs.size(); ++i)
                if (!used[i] && req.cascade_inputs[i].kgbb_instance == a->target) {
                    idx.push_back(i);
                    used[i] = true;
                }
            if (idx.size() < a->min_count)
                throw Error(ErrorCode::cascade_underflow,
                            "association requires " + std::to_string(a->min_count) + " unit(s) of " + a->target.value,
                            a->target.value);
            if (a->max_count != 0 && idx.size() > a->max_count)
                throw Error(ErrorCode::max_count_exceeded,
                            "association allows at most " + std::to_string(a->max_count) + " unit(s) of " + a->target.value,
                            a->target.value);
            for (auto i : idx) associate(id, req.cascade_inputs[i]);
        }
        for (std::size_t i = 0; i < used.size(); ++i)
            if (!used[i])
                throw Error(ErrorCode::invalid_argument, "cascade input does not match any association node",
                            req.cascade_inputs[i].kgbb_instance.value);
        if (parent) std::get<CompoundUnit>(work.units.at(*parent)).has_linked_semantic_unit.insert(id);
        return id;
    }

    Upri associate(const Upri& compound_id, const CreateRequest& req) {
        const auto* compound = work.compound(compound_id);
        if (!compound) throw Error(ErrorCode::not_found, "no such compound unit", compound_id.value);
        if (compound->meta.deleted()) throw Error(ErrorCode::already_deleted, "compound is deleted", compound_id.value);
        if (!compound->meta.editable) throw Error(ErrorCode::unit_locked, "compound is not editable", compound_id.value);
        const AssociationNode* node = nullptr;
        for (const auto* a : spec.associations_from(compound->meta.kgbb_uri))
            if (a->target == req.kgbb_instance) node = a;
        if (!node)
            throw Error(ErrorCode::invalid_argument, "no association node connects the compound to this KGBB",
                        req.kgbb_instance.value);
        if (node->max_count != 0) {
            std::size_t n = 0;
            for (const auto& m : compound->has_associated_semantic_unit)
                if (const auto* mu = work.find(m); mu && !meta_of(*mu).deleted() && meta_of(*mu).kgbb_uri == node->target)
                    ++n;
            if (n + 1 > node->max_count)
                throw Error(ErrorCode::max_count_exceeded,
                            "association allows at most " + std::to_string(node->max_count) + " unit(s)", node->target.value);
        }
        const auto* cls = spec.compound_class_of_instance(compound->meta.kgbb_uri);
        std::optional<Resolved> subject;
        if (compound->meta.subject) subject = resolved_existing(*compound->meta.subject);

        Upri member;
        if (spec.statement_class_of_instance(req.kgbb_instance)) {
            if (!subject) throw Error(ErrorCode::invalid_argument, "compound has no subject to share", compound_id.value);
            std::vector<std::pair<Upri, Upri>> carry;
            if (cls && cls->subject_constraint)
                for (const auto& pc : node->carry_over_subject_range_constraint_to) carry.emplace_back(pc, *cls->subject_constraint);
            member = new_statement(req, subject, carry, compound_id);
        } else {
            member = new_compound(req, subject, std::nullopt);
        }
        auto& c = std::get<CompoundUnit>(work.units.at(compound_id));
        c.has_associated_semantic_unit.insert(member);
        if (c.kind == CompoundKind::dataset || c.kind == CompoundKind::list) c.ordering[member] = c.ordering.size();
        return member;
    }

    // Identification units for resources registered during this call.
    void identify_new_resources(const Provenance& prov) {
        auto pending = std::move(new_resources);
        new_resources.clear();
        for (const auto& r : pending) {
            if (!r.kind) continue;
            const auto kgbb = builtin::identification_kgbb_for(*r.kind);
            const auto* res = work.resource(r.upri);
            if (!kgbb || !res || !res->class_affiliation) continue;
            register_class(*res->class_affiliation);
            CreateRequest req;
            req.kgbb_instance = *kgbb;
            req.inputs[builtin::identification_position()] = ResourceRef::existing(*res->class_affiliation);
            req.provenance = prov;
            if (*r.kind == ResourceKind::some_instance) req.category_choice = Category::contingent;
            new_statement(req, resolved_existing(r.upri), {}, std::nullopt);
        }
    }
};

Engine::Engine(std::shared_ptr<const Specification> spec, Store initial, EngineOptions options)
    : spec_(std::move(spec)), options_(std::move(options)), store_(std::make_shared<const Store>(std::move(initial))) {
    if (!spec_) throw Error(ErrorCode::invalid_argument, "engine needs a specification");
    reachable_ = reachable_instances(*spec_);
    mint_ = options_.mint ? options_.mint : uuid_minter(options_.seed);
}

std::shared_ptr<const Store> Engine::snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return store_;
}

template <class F>
auto Engine::mutate(F&& f) {
    std::lock_guard writer(writer_);
    Txn txn{*this, *spec_, *snapshot(), {}};
    const auto saved_clock = last_micros_;
    try {
        auto result = f(txn);
        auto next = std::make_shared<const Store>(std::move(txn.work));
        std::lock_guard lock(snapshot_mutex_);
        store_ = std::move(next);
        return result;
    } catch (...) {
        last_micros_ = saved_clock;
        throw;
    }
}

Upri Engine::create_unit(const CreateRequest& req) {
    if (spec_->compound_class_of_instance(req.kgbb_instance)) return create_compound_unit(req);
    return create_statement_unit(req);
}

Upri Engine::create_statement_unit(const CreateRequest& req) {
    if (!spec_->statement_class_of_instance(req.kgbb_instance))
        throw Error(ErrorCode::unknown_instance, "not a statement KGBB instance", req.kgbb_instance.value);
    if (!builtin::classes().count(req.kgbb_instance) && !reachable_.count(req.kgbb_instance))
        throw Error(ErrorCode::invalid_argument, "KGBB instance is not reachable from a data-entry starting point",
                    req.kgbb_instance.value);
    return mutate([&](Txn& t) {
        auto id = t.new_statement(req, std::nullopt, {}, std::nullopt);
        t.identify_new_resources(req.provenance);
        return id;
    });
}

Upri Engine::create_compound_unit(const CreateRequest& req) {
    if (!spec_->compound_class_of_instance(req.kgbb_instance))
        throw Error(ErrorCode::unknown_instance, "not a compound KGBB instance", req.kgbb_instance.value);
    if (!reachable_.count(req.kgbb_instance))
        throw Error(ErrorCode::invalid_argument, "KGBB instance is not reachable from a data-entry starting point",
                    req.kgbb_instance.value);
    return mutate([&](Txn& t) {
        auto id = t.new_compound(req, std::nullopt, std::nullopt);
        t.identify_new_resources(req.provenance);
        return id;
    });
}

Upri Engine::add_associated_unit(const Upri& compound, const CreateRequest& req) {
    return mutate([&](Txn& t) {
        auto id = t.associate(compound, req);
        t.identify_new_resources(req.provenance);
        return id;
    });
}

Upri Engine::create_linked_unit(const Upri& statement, const CreateRequest& req) {
    return mutate([&](Txn& t) {
        const auto* s = t.work.statement(statement);
        if (!s) throw Error(ErrorCode::not_found, "no such statement unit", statement.value);
        if (s->meta.deleted()) throw Error(ErrorCode::already_deleted, "statement is deleted", statement.value);
        const LinkNode* node = nullptr;
        for (const auto* l : spec_->links_from(s->meta.kgbb_uri))
            if (l->target == req.kgbb_instance && link_condition_holds(*spec_, t.work, *s, *l)) node = l;
        if (!node) throw Error(ErrorCode::not_applicable, "no available link to this KGBB", req.kgbb_instance.value);
        const Upri object = *current_resource(*s, node->use_as_subject);
        if (node->max_count != 0) {
            std::size_t n = 0;
            for (const auto& [id, u] : t.work.units) {
                const auto& m = meta_of(u);
                if (!m.deleted() && m.kgbb_uri == node->target && m.subject == object) ++n;
            }
            if (n + 1 > node->max_count)
                throw Error(ErrorCode::max_count_exceeded, "link node max_count reached", node->target.value);
        }
        const auto parents = compounds_containing(t.work, statement);
        Upri id = spec_->compound_class_of_instance(req.kgbb_instance)
                      ? t.new_compound(req, t.resolved_existing(object), std::nullopt)
                      : t.new_statement(req, t.resolved_existing(object), {}, std::nullopt);
        for (const auto& p : parents) std::get<CompoundUnit>(t.work.units.at(p)).has_linked_semantic_unit.insert(id);
        t.identify_new_resources(req.provenance);
        return id;
    });
}

Upri Engine::update_object_position(const Upri& unit, const Upri& position_class, const InputValue& input,
                                    const Provenance& provenance) {
    return mutate([&](Txn& t) {
        auto* u = t.work.statement(unit);
        if (!u) throw Error(ErrorCode::not_found, "no such statement unit", unit.value);
        if (u->meta.deleted()) throw Error(ErrorCode::already_deleted, "unit is deleted", unit.value);
        if (!u->meta.editable) throw Error(ErrorCode::unit_locked, "unit is not editable", unit.value);
        if (provenance.creator.empty()) throw Error(ErrorCode::invalid_argument, "a creator is required");
        const auto* cls = spec_->statement_class_of_instance(u->meta.kgbb_uri);
        if (!cls) throw Error(ErrorCode::unknown_instance, "unit's KGBB is not in the specification", u->meta.kgbb_uri.value);
        const auto* pos = cls->position(position_class);
        if (!pos) throw Error(ErrorCode::invalid_argument, "unknown object position", position_class.value);
        const bool is_builtin = builtin::classes().count(u->meta.kgbb_uri) != 0;
        Object obj = t.check_input(*cls, *pos, input, u->category, u->negated, is_builtin);
        static const std::regex instance_of(R"(^instance of <(.*)>$)");
        for (const auto& cn : u->constraint_nodes) {
            std::smatch m;
            if (cn.applies_to_object_position == position_class && std::regex_match(cn.has_constraint, m, instance_of))
                t.check_class(t.resolved_existing(std::get<Upri>(obj)), Upri(m[1].str()), position_class.value);
        }

        auto& s = std::get<StatementUnit>(t.work.units.at(unit));
        for (auto& p : s.positions)
            if (p.position_class == position_class) p.current_version = false;
        ObjectPositionInstance inst;
        inst.upri = t.mint();
        inst.position_class = position_class;
        inst.role = pos->required ? PositionRole::required : PositionRole::optional;
        inst.input_type_label = pos->thematic_label;
        inst.input = std::move(obj);
        for (auto lp : pos->logical_properties)
            if (lp != LogicalProperty::functional) {
                inst.logical_property = lp;
                break;
            }
        inst.current_version = true;
        inst.creator = provenance.creator;
        inst.creation_date = t.now();
        inst.created_with_application = t.application(provenance);
        inst.imported_from = provenance.imported_from;
        const Upri id = inst.upri;
        s.positions.push_back(std::move(inst));
        t.relabel(unit);

        // Links with min_count >= 1 to compound targets follow the new object.
        const auto parents = compounds_containing(t.work, unit);
        for (const auto* l : spec_->links_from(s.meta.kgbb_uri)) {
            if (l->min_count == 0 || l->use_as_subject != position_class || !spec_->compound_class_of_instance(l->target))
                continue;
            const auto& cur = std::get<StatementUnit>(t.work.units.at(unit));
            if (!link_condition_holds(*spec_, t.work, cur, *l)) continue;
            const Upri object = *current_resource(cur, l->use_as_subject);
            auto target = t.find_compound(l->target, object);
            if (!target) {
                CreateRequest r;
                r.kgbb_instance = l->target;
                r.provenance = provenance;
                target = t.new_compound(r, t.resolved_existing(object), std::nullopt);
            }
            for (const auto& p : parents) std::get<CompoundUnit>(t.work.units.at(p)).has_linked_semantic_unit.insert(*target);
        }
        t.identify_new_resources(provenance);
        return id;
    });
}

void Engine::soft_delete(const Upri& unit, const Upri& user, bool cascade) {
    mutate([&](Txn& t) {
        if (!t.work.find(unit)) throw Error(ErrorCode::not_found, "no such unit", unit.value);
        if (meta_of(*t.work.find(unit)).deleted()) throw Error(ErrorCode::already_deleted, "unit already deleted", unit.value);
        if (user.empty()) throw Error(ErrorCode::invalid_argument, "a user is required");
        const auto when = t.now();
        std::vector<Upri> todo{unit};
        while (!todo.empty()) {
            auto cur = todo.back();
            todo.pop_back();
            auto& m = meta_of(t.work.units.at(cur));
            if (m.deleted()) continue;
            m.deleted_by = user;
            m.deletion_date = when;
            if (!cascade) continue;
            if (const auto* c = std::get_if<CompoundUnit>(&t.work.units.at(cur)))
                for (const auto& member : c->has_associated_semantic_unit)
                    if (t.work.find(member)) todo.push_back(member);
        }
        return 0;
    });
}

Upri Engine::create_version(const Upri& unit, const Upri& user) {
    return mutate([&](Txn& t) {
        if (!t.work.find(unit)) throw Error(ErrorCode::not_found, "no such unit", unit.value);
        if (user.empty()) throw Error(ErrorCode::invalid_argument, "a user is required");
        VersionNode v;
        v.upri = t.mint();
        v.of_unit = unit;
        v.creation_date = t.now();
        v.creator = user;
        const auto chain = version_chain(t.work, unit);
        if (!chain.empty()) v.previous_version = chain.front();
        const Upri id = v.upri;
        t.work.versions.emplace(id, std::move(v));

        std::set<Upri> seen;
        std::vector<Upri> todo{unit};
        while (!todo.empty()) {
            auto cur = todo.back();
            todo.pop_back();
            if (!seen.insert(cur).second) continue;
            auto& u = t.work.units.at(cur);
            meta_of(u).version_ids.insert(id);
            if (auto* s = std::get_if<StatementUnit>(&u)) {
                for (auto& p : s->positions)
                    if (p.current_version) p.version_ids.insert(id);
            } else if (auto* c = std::get_if<CompoundUnit>(&u)) {
                for (const auto& m : c->has_associated_semantic_unit)
                    if (const auto* mu = t.work.find(m); mu && !meta_of(*mu).deleted()) todo.push_back(m);
            }
        }
        return id;
    });
}

Upri Engine::add_question(QuestionUnit q, const Provenance& provenance) {
    return mutate([&](Txn& t) {
        const auto* cls = spec_->statement_class_of_instance(q.based_on_statement_kgbb);
        if (!cls) throw Error(ErrorCode::unknown_instance, "question must be based on a statement KGBB",
                              q.based_on_statement_kgbb.value);
        validate_question(*spec_, q);
        auto meta = t.new_meta(vocab::term("question-kgbb"), provenance);
        meta.types = {vocab::term("QuestionUnit"), cls->manages};
        q.meta = meta;
        q.meta.label = render_question_label(*spec_, t.work, q);
        const Upri id = q.meta.upri;
        t.work.units.emplace(id, std::move(q));
        return id;
    });
}

Upri Engine::add_compound_question(CompoundQuestionUnit q, const Provenance& provenance) {
    return mutate([&](Txn& t) {
        std::function<void(const QuestionExpr&)> check = [&](const QuestionExpr& e) {
            if (e.op == QuestionExpr::Op::leaf) {
                const auto* u = t.work.find(e.question);
                if (!u || !std::holds_alternative<QuestionUnit>(*u))
                    throw Error(ErrorCode::not_found, "compound question names an unknown question unit", e.question.value);
                return;
            }
            if (e.operands.empty()) throw Error(ErrorCode::invalid_argument, "empty AND/OR node");
            for (const auto& x : e.operands) check(x);
        };
        check(q.expression);
        auto meta = t.new_meta(vocab::term("compound-question-kgbb"), provenance);
        meta.types = {vocab::term("CompoundQuestionUnit")};
        meta.label = to_string(q.expression);
        q.meta = meta;
        const Upri id = q.meta.upri;
        t.work.units.emplace(id, std::move(q));
        return id;
    });
}

void Engine::replace_store(Store s) {
    std::lock_guard writer(writer_);
    auto next = std::make_shared<const Store>(std::move(s));
    std::lock_guard lock(snapshot_mutex_);
    store_ = std::move(next);
}

UnitView Engine::read_unit(const Upri& unit, const std::optional<Upri>& version, bool include_deleted) const {
    auto snap = snapshot();
    return kgbb::read_unit(*spec_, *snap, unit, version, include_deleted);
}

} // namespace kgbb
