#include "pocl/partial_plan.h"

#include <algorithm>
#include <cassert>
#include <tuple>

namespace pocl {

namespace {
const std::vector<FactId> kNoFacts;

inline bool test_bit(const std::uint64_t *row, StepId s) {
    return (row[s >> 6] >> (s & 63)) & 1u;
}
} // namespace

// OrderingClosure

void OrderingClosure::grow(std::size_t words) {
    std::vector<std::uint64_t> bits(num_steps_ * words, 0);
    for (std::size_t s = 0; s < num_steps_; ++s)
        std::copy_n(bits_.begin() + s * words_, words_, bits.begin() + s * words);
    bits_ = std::move(bits);
    words_ = words;
}

StepId OrderingClosure::add_step() {
    if (num_steps_ + 1 > words_ * 64) grow(words_ * 2);
    bits_.resize((num_steps_ + 1) * words_, 0);
    return static_cast<StepId>(num_steps_++);
}

bool OrderingClosure::before(StepId a, StepId b) const {
    return test_bit(row(a), b);
}

bool OrderingClosure::add(StepId a, StepId b) {
    if (!consistent(a, b)) return false;
    if (before(a, b)) return true;
    // Every x in {a} u pred(a) gains b and everything after b.
    const std::vector<std::uint64_t> succ_b(row(b), row(b) + words_);
    for (std::size_t x = 0; x < num_steps_; ++x) {
        if (x != a && !before(static_cast<StepId>(x), a)) continue;
        std::uint64_t *rx = row(static_cast<StepId>(x));
        for (std::size_t w = 0; w < words_; ++w) rx[w] |= succ_b[w];
        rx[b >> 6] |= std::uint64_t{1} << (b & 63);
    }
    return true;
}

// PartialPlan

PartialPlan::PartialPlan(const GroundTask &task) : task_(&task), steps_{kNoAction, kNoAction} {
    orderings_.add_step();
    orderings_.add_step();
    orderings_.add(kInitStep, kGoalStep);
    for (FactId g : task.goal) open_.push_back({g, kGoalStep});
}

const std::vector<FactId> &PartialPlan::adds_of(StepId s) const {
    if (s == kInitStep) return task_->init;
    if (s == kGoalStep) return kNoFacts;
    return task_->actions[steps_[s]].add;
}

const std::vector<FactId> &PartialPlan::pre_of(StepId s) const {
    if (s == kGoalStep) return task_->goal;
    if (s == kInitStep) return kNoFacts;
    return task_->actions[steps_[s]].pre;
}

const std::vector<FactId> &PartialPlan::dels_of(StepId s) const {
    if (s == kInitStep || s == kGoalStep) return kNoFacts;
    return task_->actions[steps_[s]].del;
}

int PartialPlan::copies_of(ActionId a) const {
    return static_cast<int>(std::count(steps_.begin(), steps_.end(), a));
}

bool PartialPlan::operator==(const PartialPlan &o) const {
    return task_ == o.task_ && steps_ == o.steps_ && orderings_ == o.orderings_ &&
           links_ == o.links_ && open_ == o.open_ && threats_ == o.threats_ &&
           newest_ == o.newest_;
}

PartialPlan null_plan(const GroundTask &task) {
    return PartialPlan(task);
}

// PlanEditor

namespace {

bool possibly_between(const OrderingClosure &ord, StepId t, const CausalLink &l) {
    return t != l.producer && t != l.consumer && !ord.before(t, l.producer) &&
           !ord.before(l.consumer, t);
}

} // namespace

StepId PlanEditor::add_step(ActionId action) {
    PartialPlan &p = plan_;
    StepId s = p.orderings_.add_step();
    p.steps_.push_back(action);
    p.orderings_.add(kInitStep, s);
    p.orderings_.add(s, kGoalStep);
    for (FactId f : p.task_->actions[action].pre) p.open_.push_back({f, s});
    p.newest_ = s;
    const auto &dels = p.dels_of(s);
    for (std::uint32_t i = 0; i < p.links_.size(); ++i) {
        const CausalLink &l = p.links_[i];
        if (contains(dels, l.fact) && possibly_between(p.orderings_, s, l))
            p.threats_.push_back({s, i});
    }
    return s;
}

bool PlanEditor::order(StepId before, StepId after) {
    PartialPlan &p = plan_;
    if (!p.orderings_.add(before, after)) return false;
    std::erase_if(p.threats_, [&](const Threat &t) {
        return !possibly_between(p.orderings_, t.step, p.links_[t.link]);
    });
    return true;
}

bool PlanEditor::link(StepId producer, FactId fact, StepId consumer) {
    PartialPlan &p = plan_;
    auto oc = std::find(p.open_.begin(), p.open_.end(), OpenCondition{fact, consumer});
    if (oc == p.open_.end() || !contains(p.adds_of(producer), fact)) return false;
    if (!order(producer, consumer)) return false;
    p.open_.erase(oc);
    CausalLink l{producer, fact, consumer};
    auto index = static_cast<std::uint32_t>(p.links_.size());
    p.links_.push_back(l);
    for (StepId t = 2; t < p.steps_.size(); ++t) {
        if (contains(p.dels_of(t), fact) && possibly_between(p.orderings_, t, l))
            p.threats_.push_back({t, index});
    }
    return true;
}

PartialPlan PlanEditor::finish() {
    return std::move(plan_);
}

// Refinement

std::vector<Flaw> collect_flaws(const PartialPlan &plan) {
    std::vector<Threat> threats = plan.threats();
    auto key = [&](const Threat &t) {
        const CausalLink &l = plan.links()[t.link];
        return std::make_tuple(l.consumer, l.fact, t.step, l.producer);
    };
    std::sort(threats.begin(), threats.end(),
              [&](const Threat &a, const Threat &b) { return key(a) < key(b); });
    std::vector<OpenCondition> open = plan.open_conditions();
    std::sort(open.begin(), open.end(), [](const OpenCondition &a, const OpenCondition &b) {
        return std::tie(a.consumer, a.fact) < std::tie(b.consumer, b.fact);
    });
    std::vector<Flaw> flaws;
    flaws.reserve(threats.size() + open.size());
    for (const auto &t : threats) flaws.push_back(Flaw::of(t));
    for (const auto &oc : open) flaws.push_back(Flaw::of(oc));
    return flaws;
}

std::vector<Resolver> resolvers(const PartialPlan &plan, const Flaw &flaw,
                                const RefinementOptions &options) {
    std::vector<Resolver> out;
    const OrderingClosure &ord = plan.orderings();
    if (flaw.is_threat()) {
        const CausalLink &l = plan.links()[flaw.threat.link];
        StepId t = flaw.threat.step;
        if (ord.consistent(t, l.producer))
            out.push_back({Resolver::Kind::promotion, flaw, 0, kNoAction, t, l.producer});
        if (ord.consistent(l.consumer, t))
            out.push_back({Resolver::Kind::demotion, flaw, 0, kNoAction, l.consumer, t});
        return out;
    }
    const OpenCondition &oc = flaw.open;
    for (StepId s = 0; s < plan.num_steps(); ++s) {
        if (s == kGoalStep || s == oc.consumer) continue;
        if (contains(plan.adds_of(s), oc.fact) && ord.consistent(s, oc.consumer))
            out.push_back({Resolver::Kind::reuse_step, flaw, s});
    }
    for (ActionId a : plan.task().achievers[oc.fact]) {
        if (options.max_copies > 0 && plan.copies_of(a) >= options.max_copies) continue;
        out.push_back({Resolver::Kind::new_step, flaw, 0, a});
    }
    return out;
}

std::optional<PartialPlan> apply(const PartialPlan &plan, const Resolver &r) {
    PlanEditor editor(plan);
    switch (r.kind) {
    case Resolver::Kind::reuse_step:
        if (!editor.link(r.producer, r.flaw.open.fact, r.flaw.open.consumer)) return std::nullopt;
        break;
    case Resolver::Kind::new_step: {
        StepId s = editor.add_step(r.action);
        if (!editor.link(s, r.flaw.open.fact, r.flaw.open.consumer)) return std::nullopt;
        break;
    }
    case Resolver::Kind::promotion:
    case Resolver::Kind::demotion:
        if (!editor.order(r.before, r.after)) return std::nullopt;
        break;
    }
    return editor.finish();
}

bool is_solution(const PartialPlan &plan) {
    return plan.is_solution();
}

std::vector<Threat> threats_from_scratch(const PartialPlan &plan) {
    std::vector<Threat> out;
    for (std::uint32_t i = 0; i < plan.links().size(); ++i) {
        const CausalLink &l = plan.links()[i];
        for (StepId t = 0; t < plan.num_steps(); ++t) {
            if (contains(plan.dels_of(t), l.fact) && possibly_between(plan.orderings(), t, l))
                out.push_back({t, i});
        }
    }
    return out;
}

} // namespace pocl
