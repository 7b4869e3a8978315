#include "chasebound/homomorphism.hpp"

#include <limits>

namespace chasebound {

HomomorphismSearch::HomomorphismSearch(std::span<const Atom> source, const Instance& target,
                                       Substitution seed, MatchOptions options)
    : source_(source),
      target_(target),
      current_(std::move(seed)),
      options_(options),
      matched_(source.size(), false) {}

std::span<const std::uint32_t> HomomorphismSearch::candidate_list(std::size_t atom) const {
    const Atom& a = source_[atom];
    std::span<const std::uint32_t> best = target_.with_predicate(a.pred);
    for (std::size_t i = 0; i < a.args.size() && !best.empty(); ++i) {
        Term s = a.args[i];
        std::optional<Term> image;
        if (s.is_rigid() && options_.fix_constants) image = s;
        else image = current_.get(s);
        if (!image) continue;
        auto list = target_.with_term_at(a.pred, i, *image);
        if (list.size() < best.size()) best = list;
    }
    return best;
}

bool HomomorphismSearch::choose_and_push() {
    std::size_t chosen = source_.size();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < source_.size(); ++i) {
        if (matched_[i]) continue;
        auto n = candidate_list(i).size();
        if (n < best) {
            best = n;
            chosen = i;
        }
    }
    if (chosen == source_.size()) return false;
    Frame frame;
    frame.atom = chosen;
    auto list = candidate_list(chosen);
    std::pair<std::uint32_t, std::uint32_t> window{0, std::numeric_limits<std::uint32_t>::max()};
    if (!options_.windows.empty()) window = options_.windows[chosen];
    frame.candidates.reserve(list.size());
    for (auto idx : list)
        if (idx >= window.first && idx < window.second) frame.candidates.push_back(idx);
    matched_[chosen] = true;
    stack_.push_back(std::move(frame));
    return true;
}

bool HomomorphismSearch::try_candidate(Frame& frame, std::uint32_t target_index) {
    const Atom& s = source_[frame.atom];
    const Atom& t = target_[target_index];
    if (s.pred != t.pred || s.args.size() != t.args.size()) return false;
    for (std::size_t i = 0; i < s.args.size(); ++i) {
        Term from = s.args[i];
        Term to = t.args[i];
        if (from.is_rigid() && options_.fix_constants) {
            if (from != to) {
                undo(frame);
                return false;
            }
            continue;
        }
        if (auto existing = current_.get(from)) {
            if (*existing != to) {
                undo(frame);
                return false;
            }
            continue;
        }
        current_.bind(from, to);
        frame.bound.push_back(from);
    }
    return true;
}

void HomomorphismSearch::undo(Frame& frame) {
    for (auto t : frame.bound) current_.unbind(t);
    frame.bound.clear();
}

std::optional<Substitution> HomomorphismSearch::next() {
    if (done_) return std::nullopt;
    if (!started_) {
        started_ = true;
        if (source_.empty()) {
            done_ = true;
            return current_;
        }
        choose_and_push();
    }
    while (!stack_.empty()) {
        Frame& frame = stack_.back();
        undo(frame);
        bool advanced = false;
        while (frame.cursor < frame.candidates.size()) {
            auto idx = frame.candidates[frame.cursor++];
            if (try_candidate(frame, idx)) {
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            matched_[frame.atom] = false;
            stack_.pop_back();
            continue;
        }
        if (stack_.size() == source_.size()) return current_;
        choose_and_push();
    }
    done_ = true;
    return std::nullopt;
}

void for_each_homomorphism(std::span<const Atom> source, const Instance& target,
                           const Substitution& seed,
                           const std::function<bool(const Substitution&)>& visit,
                           MatchOptions options) {
    HomomorphismSearch search(source, target, seed, options);
    while (auto h = search.next())
        if (!visit(*h)) return;
}

std::vector<Substitution> find_homomorphisms(std::span<const Atom> source, const Instance& target,
                                             const Substitution& seed) {
    std::vector<Substitution> out;
    HomomorphismSearch search(source, target, seed);
    while (auto h = search.next()) out.push_back(std::move(*h));
    return out;
}

std::optional<Substitution> first_homomorphism(std::span<const Atom> source,
                                               const Instance& target,
                                               const Substitution& seed) {
    HomomorphismSearch search(source, target, seed);
    return search.next();
}

std::vector<Substitution> find_embeddings(std::span<const Atom> source, const Instance& target) {
    std::vector<Substitution> out;
    MatchOptions options;
    options.fix_constants = false;
    HomomorphismSearch search(source, target, {}, options);
    while (auto h = search.next()) out.push_back(std::move(*h));
    return out;
}

bool is_homomorphism(const Substitution& s, std::span<const Atom> source, const Instance& target) {
    for (const auto& a : source) {
        for (auto t : a.args)
            if (t.is_rigid() && s.get(t) && *s.get(t) != t) return false;
        if (!target.contains(s.apply(a))) return false;
    }
    return true;
}

}  // namespace chasebound
