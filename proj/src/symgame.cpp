#include "embq/symgame.hpp"

#include "embq/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace embq {

SymCard SymCard::plus(const SymCard& o) const {
    if (infinite() || o.infinite()) return *this < o ? o : *this;
    return finite(value + o.value);
}

SymCard SymCard::minus_finite(uint64_t k) const {
    if (infinite()) return *this;
    if (value < k) throw EngineError("SymCard: negative finite difference");
    return finite(value - k);
}

std::string SymCard::to_string() const {
    switch (kind) {
        case Kind::Aleph0: return "aleph0";
        case Kind::Aleph1: return "aleph1";
        default: return std::to_string(value);
    }
}

SymCard SymCard::parse(const std::string& text) {
    if (text == "aleph0") return aleph0();
    if (text == "aleph1") return aleph1();
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing");
        return finite(v);
    } catch (const std::exception&) {
        throw UsageError("bad cardinal '" + text + "' (expected natural | aleph0 | aleph1)");
    }
}

SymEqStructure SymEqStructure::from_profile(std::vector<std::pair<SymCard, SymCard>> entries) {
    SymEqStructure e;
    std::map<std::string, std::pair<SymCard, SymCard>> merged; // keyed by size string, for dedup
    for (auto& [size, count] : entries) {
        if (size.is_zero()) throw UsageError("profile: class size must be >= 1");
        if (count.is_zero()) continue;
        auto it = merged.find(size.to_string());
        if (it == merged.end())
            merged.emplace(size.to_string(), std::make_pair(size, count));
        else
            it->second.second = it->second.second.plus(count);
    }
    for (auto& [_, sc] : merged) e.profile.push_back(sc);
    std::sort(e.profile.begin(), e.profile.end(),
              [](const auto& a, const auto& b) { return b.first < a.first; }); // size descending
    e.validate();
    return e;
}

void SymEqStructure::validate() const {
    for (const auto& [size, count] : profile) {
        if (size.is_zero()) throw UsageError("profile: class size must be >= 1");
        if (count.is_zero()) throw UsageError("profile: zero class count");
    }
    std::map<std::string, uint64_t> touched_per_size;
    for (const auto& tc : touched) {
        if (tc.pin_count < 1) throw UsageError("touched class without pins");
        if (SymCard::finite(tc.pin_count) < tc.size || SymCard::finite(tc.pin_count) == tc.size) {
            // pin_count <= size
        } else {
            throw UsageError("touched class: more pins than the class size allows");
        }
        ++touched_per_size[tc.size.to_string()];
    }
    for (const auto& [size_str, cnt] : touched_per_size) {
        bool found = false;
        for (const auto& [size, count] : profile) {
            if (size.to_string() == size_str) {
                found = true;
                if (count < SymCard::finite(cnt))
                    throw UsageError("more touched classes of size " + size_str +
                                     " than the profile provides");
            }
        }
        if (!found) throw UsageError("touched class of size " + size_str + " not in profile");
    }
    std::set<std::string> ids;
    std::map<int, int> pins_per_class;
    for (const auto& p : pins) {
        if (!ids.insert(p.id).second) throw UsageError("duplicate pin id '" + p.id + "'");
        if (p.cls < 0 || p.cls >= static_cast<int>(touched.size()))
            throw UsageError("pin '" + p.id + "': bad class reference");
        ++pins_per_class[p.cls];
    }
    for (size_t c = 0; c < touched.size(); ++c) {
        if (pins_per_class[static_cast<int>(c)] != touched[c].pin_count)
            throw UsageError("touched class pin count mismatch");
    }
}

SymCard SymEqStructure::count_of_size(const SymCard& s) const {
    for (const auto& [size, count] : profile)
        if (size == s) return count;
    return SymCard::finite(0);
}

SymCard SymEqStructure::untouched_count(const SymCard& s) const {
    uint64_t t = 0;
    for (const auto& tc : touched)
        if (tc.size == s) ++t;
    return count_of_size(s).minus_finite(t);
}

int SymEqStructure::pin_class(const std::string& pin_id) const {
    for (const auto& p : pins)
        if (p.id == pin_id) return p.cls;
    throw UsageError("unknown pin id '" + pin_id + "'");
}

int SymEqStructure::touch_class(const SymCard& size, const std::string& pin_id) {
    if (untouched_count(size).is_zero())
        throw UsageError("no untouched class of size " + size.to_string() + " remains");
    touched.push_back({size, 1});
    int cls = static_cast<int>(touched.size()) - 1;
    pins.push_back({pin_id, cls});
    return cls;
}

void SymEqStructure::pin_in_class(int cls, const std::string& pin_id) {
    if (cls < 0 || cls >= static_cast<int>(touched.size())) throw UsageError("bad class reference");
    if (!(SymCard::finite(touched[cls].pin_count) < touched[cls].size))
        throw UsageError("class is fully pinned");
    ++touched[cls].pin_count;
    pins.push_back({pin_id, cls});
}

Structure SymEqStructure::materialize() const {
    std::vector<int> class_sizes;
    for (const auto& tc : touched) {
        if (tc.size.infinite()) throw UsageError("materialize: infinite class size");
        class_sizes.push_back(static_cast<int>(tc.size.value));
    }
    for (const auto& [size, count] : profile) {
        if (size.infinite() || count.infinite()) throw UsageError("materialize: infinite profile entry");
        for (uint64_t i = 0; i < untouched_count(size).value; ++i)
            class_sizes.push_back(static_cast<int>(size.value));
    }
    std::vector<std::string> universe;
    std::map<std::string, std::set<std::vector<int>>> interp;
    auto& e = interp["E"];
    int base = 0;
    for (size_t c = 0; c < class_sizes.size(); ++c) {
        for (int v = 0; v < class_sizes[c]; ++v)
            universe.push_back(std::to_string(c) + "." + std::to_string(v));
        for (int i = 0; i < class_sizes[c]; ++i)
            for (int j = 0; j < class_sizes[c]; ++j) e.insert({base + i, base + j});
        base += class_sizes[c];
    }
    return Structure::make_indexed(Vocabulary::of({{"E", 2}}), std::move(universe), std::move(interp));
}

SymEqStructure parse_profile(const std::string& text) {
    std::vector<std::pair<SymCard, SymCard>> entries;
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    while (pos < text.size()) {
        if (text[pos] != '(') throw UsageError("profile: expected '(' at position " + std::to_string(pos));
        ++pos;
        size_t x = text.find('x', pos);
        if (x == std::string::npos) throw UsageError("profile: expected 'x' in entry");
        std::string size_str = text.substr(pos, x - pos);
        size_t close = text.find(')', x);
        if (close == std::string::npos) throw UsageError("profile: expected ')'");
        std::string count_str = text.substr(x + 1, close - x - 1);
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t");
            size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        entries.push_back({SymCard::parse(trim(size_str)), SymCard::parse(trim(count_str))});
        pos = close + 1;
        skip_ws();
        if (pos < text.size()) {
            if (text[pos] != ',') throw UsageError("profile: expected ',' between entries");
            ++pos;
            skip_ws();
        }
    }
    if (entries.empty()) throw UsageError("profile: empty");
    return SymEqStructure::from_profile(std::move(entries));
}

std::string profile_to_string(const SymEqStructure& e) {
    std::ostringstream out;
    for (size_t i = 0; i < e.profile.size(); ++i) {
        if (i) out << ",";
        out << "(" << e.profile[i].first.to_string() << " x " << e.profile[i].second.to_string() << ")";
    }
    return out.str();
}

namespace {

struct Pool {
    // Individually listed classes (touched but unforced), plus bulk counts.
    std::vector<SymCard> single_sizes;
    std::vector<std::pair<SymCard, SymCard>> bulk; // size -> count

    SymCard count_at_least(const SymCard& s) const {
        SymCard total = SymCard::finite(0);
        for (const auto& sz : single_sizes)
            if (!(sz < s)) total = total.plus(SymCard::finite(1));
        for (const auto& [sz, cnt] : bulk)
            if (!(sz < s)) total = total.plus(cnt);
        return total;
    }

    std::vector<SymCard> all_sizes() const {
        std::vector<SymCard> out = single_sizes;
        for (const auto& [sz, _] : bulk) out.push_back(sz);
        return out;
    }
};

bool pools_dominate(const Pool& src, const Pool& dst) {
    for (const auto& s : src.all_sizes()) {
        if (dst.count_at_least(s) < src.count_at_least(s)) return false;
    }
    return true;
}

} // namespace

bool sym_embedding_exists(const SymEqStructure& e, const SymEqStructure& f,
                          const std::vector<std::pair<std::string, std::string>>& pin_map) {
    e.validate();
    f.validate();
    // Pin map: well defined and injective on pin ids.
    std::map<std::string, std::string> fwd;
    std::set<std::string> targets;
    for (const auto& [p, q] : pin_map) {
        if (!fwd.emplace(p, q).second) throw UsageError("pin map: '" + p + "' mapped twice");
        if (!targets.insert(q).second) return false; // two distinct elements share an image
    }
    // Forced class correspondence from the mapped pins.
    std::map<int, int> cls_map;
    std::map<int, int> cls_targets; // target class -> source class
    std::map<int, uint64_t> mapped_per_class;
    for (const auto& [p, q] : fwd) {
        int cs = e.pin_class(p);
        int ct = f.pin_class(q);
        auto it = cls_map.find(cs);
        if (it != cls_map.end() && it->second != ct) return false; // class split across two images
        cls_map[cs] = ct;
        auto jt = cls_targets.find(ct);
        if (jt != cls_targets.end() && jt->second != cs) return false; // two classes merged
        cls_targets[ct] = cs;
        ++mapped_per_class[cs];
    }
    // Residual capacity per forced pair.
    for (const auto& [cs, ct] : cls_map) {
        uint64_t k = mapped_per_class[cs];
        if (f.touched[ct].size.minus_finite(k) < e.touched[cs].size.minus_finite(k)) return false;
    }
    // Remaining classes: threshold condition.
    Pool src, dst;
    for (size_t c = 0; c < e.touched.size(); ++c)
        if (!cls_map.count(static_cast<int>(c))) src.single_sizes.push_back(e.touched[c].size);
    for (const auto& [size, count] : e.profile) {
        SymCard u = e.untouched_count(size);
        if (!u.is_zero()) src.bulk.push_back({size, u});
    }
    for (size_t c = 0; c < f.touched.size(); ++c)
        if (!cls_targets.count(static_cast<int>(c))) dst.single_sizes.push_back(f.touched[c].size);
    for (const auto& [size, count] : f.profile) {
        SymCard u = f.untouched_count(size);
        if (!u.is_zero()) dst.bulk.push_back({size, u});
    }
    return pools_dominate(src, dst);
}

namespace {

struct PairState {
    SymCard left_size;
    SymCard right_size;
    uint64_t pins = 0;
};

struct SymState {
    std::vector<PairState> pairs;
    std::map<std::string, std::pair<SymCard, SymCard>> untouched_l; // key: size string
    std::map<std::string, std::pair<SymCard, SymCard>> untouched_r;

    std::string key(int rounds) const {
        std::ostringstream out;
        out << rounds << '#';
        std::vector<std::string> ps;
        for (const auto& p : pairs)
            ps.push_back(p.left_size.to_string() + "/" + p.right_size.to_string() + "/" +
                         std::to_string(p.pins));
        std::sort(ps.begin(), ps.end());
        for (const auto& s : ps) out << s << ';';
        out << '|';
        for (const auto& [k, v] : untouched_l) out << k << '=' << v.second.to_string() << ',';
        out << '|';
        for (const auto& [k, v] : untouched_r) out << k << '=' << v.second.to_string() << ',';
        return out.str();
    }
};

void decrement(std::map<std::string, std::pair<SymCard, SymCard>>& m, const SymCard& size) {
    auto it = m.find(size.to_string());
    if (it == m.end()) throw EngineError("sym_game: decrement of missing size");
    it->second.second = it->second.second.minus_finite(1);
    if (it->second.second.is_zero()) m.erase(it);
}

class SymSolver {
  public:
    SymSolver(const SymGameLimits& limits) : limits_(limits) {}

    // Feasibility of one direction: per-pair residual domination plus the
    // threshold condition on untouched pools.
    static bool direction_feasible(const SymState& st, bool left_to_right) {
        for (const auto& p : st.pairs) {
            const SymCard& src = left_to_right ? p.left_size : p.right_size;
            const SymCard& dst = left_to_right ? p.right_size : p.left_size;
            if (dst.minus_finite(p.pins) < src.minus_finite(p.pins)) return false;
        }
        Pool src_pool, dst_pool;
        const auto& src_map = left_to_right ? st.untouched_l : st.untouched_r;
        const auto& dst_map = left_to_right ? st.untouched_r : st.untouched_l;
        for (const auto& [_, sc] : src_map) src_pool.bulk.push_back(sc);
        for (const auto& [_, sc] : dst_map) dst_pool.bulk.push_back(sc);
        return pools_dominate(src_pool, dst_pool);
    }

    bool survives(const SymState& st, int n) {
        if (n == 0) return true;
        std::string key = st.key(n);
        auto hit = memo_.find(key);
        if (hit != memo_.end()) return hit->second;
        if (static_cast<long long>(memo_.size()) > limits_.max_states)
            throw CapError("sym_game: state cap exceeded");
        bool value = compute(st, n);
        memo_.emplace(std::move(key), value);
        return value;
    }

    bool compute(const SymState& st, int n) {
        if (!direction_feasible(st, true) || !direction_feasible(st, false)) return false;
        // Schema-independent moves: a fresh element in a touched pair.
        for (size_t i = 0; i < st.pairs.size(); ++i) {
            if (SymCard::finite(st.pairs[i].pins) < st.pairs[i].left_size) {
                SymState child = st;
                ++child.pairs[i].pins;
                if (!survives(child, n - 1)) return false;
            }
        }
        // Untouched moves, decoupled per direction.
        return schema_side_ok(st, n, true) && schema_side_ok(st, n, false);
    }

    // Exists an assignment-support family for the moving side such that all
    // Spoiler descriptors it admits lead to surviving children.
    bool schema_side_ok(const SymState& st, int n, bool spoiler_left) {
        const auto& moving = spoiler_left ? st.untouched_l : st.untouched_r;
        const auto& image = spoiler_left ? st.untouched_r : st.untouched_l;
        std::vector<std::pair<SymCard, SymCard>> sizes(moving.size());
        std::transform(moving.begin(), moving.end(), sizes.begin(),
                       [](const auto& kv) { return kv.second; });
        if (sizes.empty()) return true;

        // Per size, the allowed target sizes (image side, dominating).
        std::vector<std::vector<SymCard>> allowed(sizes.size());
        for (size_t i = 0; i < sizes.size(); ++i) {
            for (const auto& [_, sc] : image)
                if (!(sc.first < sizes[i].first)) allowed[i].push_back(sc.first);
            if (allowed[i].empty()) return false; // no valid total assignment at all
        }

        // Enumerate support families (nonempty subsets per size).
        std::vector<int> choice(sizes.size(), 1);
        std::function<bool(size_t)> try_family = [&](size_t idx) -> bool {
            if (idx == sizes.size()) {
                std::vector<std::vector<SymCard>> supports(sizes.size());
                for (size_t i = 0; i < sizes.size(); ++i)
                    for (size_t j = 0; j < allowed[i].size(); ++j)
                        if (choice[i] & (1 << j)) supports[i].push_back(allowed[i][j]);
                if (!family_feasible(sizes, supports, image)) return false;
                for (size_t i = 0; i < sizes.size(); ++i) {
                    for (const auto& target : supports[i]) {
                        SymState child = st;
                        SymCard l_size = spoiler_left ? sizes[i].first : target;
                        SymCard r_size = spoiler_left ? target : sizes[i].first;
                        child.pairs.push_back({l_size, r_size, 1});
                        decrement(child.untouched_l, l_size);
                        decrement(child.untouched_r, r_size);
                        if (!survives(child, n - 1)) return false;
                    }
                }
                return true;
            }
            for (int mask = 1; mask < (1 << allowed[idx].size()); ++mask) {
                choice[idx] = mask;
                if (try_family(idx + 1)) return true;
            }
            return false;
        };
        return try_family(0);
    }

    // Can every moving-side untouched class be assigned a target of a
    // support size, injectively and covering each support member at least
    // once? Reserve one target per support edge, then check the subset
    // (Hall) condition on the residual transportation problem.
    static bool family_feasible(const std::vector<std::pair<SymCard, SymCard>>& sizes,
                                const std::vector<std::vector<SymCard>>& supports,
                                const std::map<std::string, std::pair<SymCard, SymCard>>& image) {
        std::map<std::string, SymCard> capacity;
        for (const auto& [_, sc] : image) capacity[sc.first.to_string()] = sc.second;
        std::map<std::string, uint64_t> reserved;
        for (size_t i = 0; i < sizes.size(); ++i) {
            if (sizes[i].second < SymCard::finite(supports[i].size())) return false;
            for (const auto& t : supports[i]) ++reserved[t.to_string()];
        }
        for (const auto& [key, cnt] : reserved)
            if (capacity.at(key) < SymCard::finite(cnt)) return false;
        // Residual supplies and capacities.
        std::vector<SymCard> supply(sizes.size());
        for (size_t i = 0; i < sizes.size(); ++i)
            supply[i] = sizes[i].second.infinite()
                            ? sizes[i].second
                            : sizes[i].second.minus_finite(supports[i].size());
        std::map<std::string, SymCard> residual = capacity;
        for (const auto& [key, cnt] : reserved)
            residual[key] = residual[key].infinite() ? residual[key] : residual[key].minus_finite(cnt);
        const size_t m = sizes.size();
        for (size_t subset = 1; subset < (1u << m); ++subset) {
            SymCard need = SymCard::finite(0);
            std::set<std::string> reach;
            for (size_t i = 0; i < m; ++i) {
                if (!(subset & (1u << i))) continue;
                need = need.plus(supply[i]);
                for (const auto& t : supports[i]) reach.insert(t.to_string());
            }
            SymCard avail = SymCard::finite(0);
            for (const auto& key : reach) avail = avail.plus(residual.at(key));
            if (avail < need) return false;
        }
        return true;
    }

    const SymGameLimits& limits_;
    std::unordered_map<std::string, bool> memo_;
};

SymState state_from_position(const SymPosition& pos) {
    if (!pos.left.pins.empty() || !pos.right.pins.empty())
        throw UsageError("sym_game: positions carry pins through `pairs`; pinned profiles are not supported");
    SymState st;
    for (const auto& [size, count] : pos.left.profile)
        st.untouched_l[size.to_string()] = {size, count};
    for (const auto& [size, count] : pos.right.profile)
        st.untouched_r[size.to_string()] = {size, count};
    for (const auto& [l, r, pins] : pos.pairs) {
        if (pins == 0) throw UsageError("sym_game: paired classes must hold at least one pin");
        if (!st.untouched_l.count(l.to_string()) || !st.untouched_r.count(r.to_string()))
            throw UsageError("sym_game: pair consumes a class size the profile does not provide");
        st.pairs.push_back({l, r, pins});
        decrement(st.untouched_l, l);
        decrement(st.untouched_r, r);
    }
    return st;
}

} // namespace

bool sym_position_feasible(const SymPosition& pos, bool left_to_right) {
    return SymSolver::direction_feasible(state_from_position(pos), left_to_right);
}

SymGameOutcome sym_game(const SymEqStructure& left, const SymEqStructure& right, int rounds,
                        const SymGameLimits& limits) {
    return sym_game_from({left, right, {}}, rounds, limits);
}

SymGameOutcome sym_game_from(const SymPosition& pos, int rounds, const SymGameLimits& limits) {
    if (rounds < 0) throw UsageError("sym_game: rounds must be >= 0");
    if (rounds > limits.max_rounds)
        throw CapError("sym_game: rounds " + std::to_string(rounds) + " exceeds cap " +
                       std::to_string(limits.max_rounds));
    pos.left.validate();
    pos.right.validate();

    SymSolver solver(limits);
    SymState st = state_from_position(pos);
    SymGameOutcome outcome;
    outcome.rounds = rounds;
    outcome.survives = solver.survives(st, rounds);

    // Principal line.
    SymState cur = st;
    for (int n = rounds; n > 0; --n) {
        if (!SymSolver::direction_feasible(cur, true)) {
            outcome.blocked_direction = "left-to-right";
            break;
        }
        if (!SymSolver::direction_feasible(cur, false)) {
            outcome.blocked_direction = "right-to-left";
            break;
        }
        bool value = solver.survives(cur, n);
        std::optional<SymGameMove> move;
        SymState next;
        if (!value) {
            // Find a winning Spoiler descriptor: first a pair move, then an
            // untouched move that defeats every feasible schema.
            for (size_t i = 0; i < cur.pairs.size() && !move; ++i) {
                if (SymCard::finite(cur.pairs[i].pins) < cur.pairs[i].left_size) {
                    SymState child = cur;
                    ++child.pairs[i].pins;
                    if (!solver.survives(child, n - 1)) {
                        move = SymGameMove{true, SymGameMove::Kind::FreshInTouchedPair,
                                           static_cast<int>(i), {}, {}};
                        next = child;
                    }
                }
            }
            for (int side = 0; side < 2 && !move; ++side) {
                const bool spoiler_left = side == 0;
                const auto& moving = spoiler_left ? cur.untouched_l : cur.untouched_r;
                const auto& image = spoiler_left ? cur.untouched_r : cur.untouched_l;
                for (const auto& [_, sc] : moving) {
                    for (const auto& [__, tc] : image) {
                        if (tc.first < sc.first) continue;
                        SymState child = cur;
                        SymCard l_size = spoiler_left ? sc.first : tc.first;
                        SymCard r_size = spoiler_left ? tc.first : sc.first;
                        child.pairs.push_back({l_size, r_size, 1});
                        decrement(child.untouched_l, l_size);
                        decrement(child.untouched_r, r_size);
                        if (!solver.survives(child, n - 1)) {
                            move = SymGameMove{spoiler_left, SymGameMove::Kind::FreshUntouched, -1,
                                               sc.first, tc.first};
                            next = child;
                            break;
                        }
                    }
                    if (move) break;
                }
            }
            if (!move) break; // value is false only through feasibility next round
        } else {
            // Any move; prefer a pair move, else the first untouched move.
            for (size_t i = 0; i < cur.pairs.size() && !move; ++i) {
                if (SymCard::finite(cur.pairs[i].pins) < cur.pairs[i].left_size) {
                    SymState child = cur;
                    ++child.pairs[i].pins;
                    move = SymGameMove{true, SymGameMove::Kind::FreshInTouchedPair,
                                       static_cast<int>(i), {}, {}};
                    next = child;
                }
            }
            if (!move) {
                for (const auto& [_, sc] : cur.untouched_l) {
                    for (const auto& [__, tc] : cur.untouched_r) {
                        if (tc.first < sc.first) continue;
                        SymState child = cur;
                        child.pairs.push_back({sc.first, tc.first, 1});
                        decrement(child.untouched_l, sc.first);
                        decrement(child.untouched_r, tc.first);
                        if (solver.survives(child, n - 1)) {
                            move = SymGameMove{true, SymGameMove::Kind::FreshUntouched, -1, sc.first,
                                               tc.first};
                            next = child;
                            break;
                        }
                    }
                    if (move) break;
                }
            }
            if (!move) break; // no progressive moves exist; position repeats
        }
        outcome.witness.push_back(*move);
        cur = next;
    }
    return outcome;
}

} // namespace embq
