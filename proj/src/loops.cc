#include "loops.h"

namespace shades::detail {

std::string render_config(const RewriteSystem& sys, int control, const std::vector<int>& stack,
                          bool opaque_bottom) {
  constexpr std::size_t kShown = 8;
  std::string out = sys.controls[control];
  switch (sys.style) {
    case RenderStyle::Plain: return out;
    case RenderStyle::Counter: {
      std::string inner;
      if (stack.size() > kShown) inner = "s^" + std::to_string(stack.size()) + " ";
      else
        for (std::size_t i = 0; i < stack.size(); ++i) inner += "s ";
      inner += opaque_bottom ? "N" : "z";
      return out + "(" + inner + ")";
    }
    case RenderStyle::Stack: {
      std::string inner;
      std::size_t shown = 0;
      for (auto it = stack.rbegin(); it != stack.rend() && shown < kShown; ++it, ++shown)
        inner += (inner.empty() ? "" : " ") + sys.symbols[*it];
      if (stack.size() > kShown) inner += " ...";
      if (opaque_bottom) inner += inner.empty() ? "S" : " S";
      return out + "(" + (inner.empty() ? "eps" : inner) + ")";
    }
  }
  return out;
}

namespace {

class Engine {
 public:
  explicit Engine(const RewriteSystem& sys) : sys_(sys), sums_(sys.rules.size()) {}

  LoopReport run() {
    int tops = static_cast<int>(sys_.symbols.size());
    for (int c = 0; c < static_cast<int>(sys_.controls.size()); ++c)
      for (int t = -1; t < tops; ++t) {
        if (sums_[sys_.index(c, t)].st != St::Unknown) continue;
        stack_.clear();
        opaque_ = t >= 0;
        if (t >= 0) stack_.push_back(t);
        trace_.clear();
        compute(c, t);
      }
    for (int c = 0; c < static_cast<int>(sys_.controls.size()); ++c)
      for (int t = -1; t < tops; ++t) {
        auto st = sums_[sys_.index(c, t)].st;
        if (st == St::Loop) report_.bad.emplace_back(c, t);
        if (st == St::Missing) report_.missing.emplace_back(c, t);
      }
    return std::move(report_);
  }

 private:
  enum class St : std::uint8_t { Unknown, Busy, Stop, Missing, Loop, Pop };
  struct Summary {
    St st = St::Unknown;
    int exit = -1;
    std::size_t mark = 0;
  };
  struct Outcome {
    St st;
    int exit;
  };

  void note(int control) {
    auto text = render_config(sys_, control, stack_, opaque_);
    if (trace_.empty() || trace_.back() != text) trace_.push_back(std::move(text));
  }

  Outcome get(int c, int t) {
    Summary& s = sums_[sys_.index(c, t)];
    if (s.st == St::Unknown) return compute(c, t);
    if (s.st == St::Busy) {
      // back at an unfinished (control, top) without dropping below it
      if (report_.witness.empty())
        report_.witness.assign(trace_.begin() + static_cast<std::ptrdiff_t>(s.mark), trace_.end());
      return {St::Loop, -1};
    }
    return {s.st, s.exit};
  }

  Outcome finish(int c, int t, St st, int exit = -1) {
    Summary& s = sums_[sys_.index(c, t)];
    s.st = st;
    s.exit = exit;
    return {st, exit};
  }

  Outcome compute(int c, int t) {
    note(c);
    sums_[sys_.index(c, t)].st = St::Busy;
    sums_[sys_.index(c, t)].mark = trace_.size() - 1;
    const RewriteRule& r = sys_.rule(c, t);
    if (r.kind == RewriteRule::Kind::Stop) return finish(c, t, St::Stop);
    if (r.kind == RewriteRule::Kind::Missing) return finish(c, t, St::Missing);
    ++report_.steps;
    std::size_t base;
    bool closed = false;
    if (r.reset || t < 0) {
      stack_.clear();
      opaque_ = false;
      base = 0;
      closed = true;
    } else {
      base = stack_.size() - 1;
      if (r.pop) stack_.pop_back();
    }
    for (auto it = r.push.rbegin(); it != r.push.rend(); ++it) stack_.push_back(*it);
    int cur = r.next;
    while (true) {
      note(cur);
      if (stack_.size() == base) {
        if (!closed) return finish(c, t, St::Pop, cur);
        auto o = get(cur, -1);
        return finish(c, t, o.st == St::Pop ? St::Loop : o.st);
      }
      std::size_t height = stack_.size();
      auto o = get(cur, stack_.back());
      if (o.st != St::Pop) return finish(c, t, o.st);
      stack_.resize(height - 1);
      cur = o.exit;
      ++report_.steps;
    }
  }

  const RewriteSystem& sys_;
  std::vector<Summary> sums_;
  std::vector<int> stack_;
  bool opaque_ = false;
  std::vector<std::string> trace_;
  LoopReport report_;
};

}  // namespace

LoopReport analyze_loops(const RewriteSystem& sys) { return Engine(sys).run(); }

}  // namespace shades::detail
