#include "assess/question.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>

namespace assess {

namespace {

constexpr std::array<std::string_view, question_type_count> kTypeNames{
    "multiple_choice", "multiple_response", "true_false", "fill_blanks", "matching",
    "sequence",        "hotspot",           "drag_drop",  "select_lists", "likert"};

class Checker {
 public:
  void fail(ErrorCode code, std::string path, std::string message) {
    out_.push_back({code, std::move(path), std::move(message)});
  }

  // Option lists need unique, non-empty ids and at least `min` entries.
  std::set<std::string> options(const std::vector<Option>& opts, const std::string& path,
                                std::size_t min) {
    std::set<std::string> ids;
    if (opts.size() < min) {
      fail(ErrorCode::InvalidQuestion, path,
           "needs at least " + std::to_string(min) + " entries");
    }
    for (std::size_t i = 0; i < opts.size(); ++i) {
      const auto& id = opts[i].id;
      if (id.empty()) {
        fail(ErrorCode::InvalidQuestion, path + "[" + std::to_string(i) + "].id", "empty id");
      } else if (!ids.insert(id).second) {
        fail(ErrorCode::InvalidQuestion, path + "[" + std::to_string(i) + "].id",
             "duplicate id '" + id + "'");
      }
    }
    return ids;
  }

  // `key` must map exactly the ids in `domain`, each to a member of `range`.
  void total_map(const std::map<std::string, std::string>& key, const std::set<std::string>& domain,
                 const std::set<std::string>& range) {
    for (const auto& id : domain) {
      if (!key.contains(id)) fail(ErrorCode::MalformedKey, "key", "no key entry for '" + id + "'");
    }
    for (const auto& [from, to] : key) {
      if (!domain.contains(from)) {
        fail(ErrorCode::MalformedKey, "key", "key references undeclared '" + from + "'");
      } else if (!range.contains(to)) {
        fail(ErrorCode::MalformedKey, "key", "'" + from + "' keyed to undeclared '" + to + "'");
      }
    }
  }

  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

void check_content(Checker& c, const MultipleChoice& mc) {
  auto ids = c.options(mc.options, "body.options", 2);
  if (!ids.contains(mc.key)) {
    c.fail(ErrorCode::MalformedKey, "key", "key '" + mc.key + "' is not a declared option");
  }
}

void check_content(Checker& c, const MultipleResponse& mr) {
  auto ids = c.options(mr.options, "body.options", 2);
  if (mr.key.empty()) c.fail(ErrorCode::MalformedKey, "key", "at least one option must be keyed");
  std::set<std::string> seen;
  for (const auto& k : mr.key) {
    if (!ids.contains(k)) c.fail(ErrorCode::MalformedKey, "key", "'" + k + "' is not a declared option");
    if (!seen.insert(k).second) c.fail(ErrorCode::MalformedKey, "key", "'" + k + "' keyed twice");
  }
}

void check_content(Checker&, const TrueFalse&) {}

void check_content(Checker& c, const FillBlanks& fb) {
  std::set<std::string> ids;
  if (fb.blanks.empty()) c.fail(ErrorCode::InvalidQuestion, "body.blanks", "needs at least 1 blank");
  for (const auto& b : fb.blanks) {
    if (b.empty() || !ids.insert(b).second) {
      c.fail(ErrorCode::InvalidQuestion, "body.blanks", "blank ids must be unique and non-empty");
    }
  }
  for (const auto& id : ids) {
    auto it = fb.key.find(id);
    if (it == fb.key.end() || it->second.empty()) {
      c.fail(ErrorCode::MalformedKey, "key", "no acceptable answer for blank '" + id + "'");
      continue;
    }
    for (const auto& accepted : it->second) {
      if (blank(accepted)) c.fail(ErrorCode::MalformedKey, "key", "empty answer for blank '" + id + "'");
    }
  }
  for (const auto& [id, _] : fb.key) {
    if (!ids.contains(id)) c.fail(ErrorCode::MalformedKey, "key", "key references undeclared blank '" + id + "'");
  }
}

void check_content(Checker& c, const Matching& m) {
  auto left = c.options(m.left, "body.left", 2);
  auto right = c.options(m.right, "body.right", 2);
  if (m.left.size() != m.right.size()) {
    c.fail(ErrorCode::InvalidQuestion, "body", "left and right sets differ in size");
  }
  c.total_map(m.key, left, right);
  std::set<std::string> targets;
  for (const auto& [_, to] : m.key) {
    if (!targets.insert(to).second) {
      c.fail(ErrorCode::MalformedKey, "key", "right item '" + to + "' matched twice");
    }
  }
}

void check_content(Checker& c, const Sequence& s) {
  auto ids = c.options(s.items, "body.items", 2);
  auto keyed = std::set<std::string>(s.key.begin(), s.key.end());
  if (keyed != ids || s.key.size() != ids.size()) {
    c.fail(ErrorCode::MalformedKey, "key", "key must be a permutation of the item ids");
  }
}

void check_content(Checker& c, const Hotspot& h) {
  if (h.image.empty()) c.fail(ErrorCode::InvalidQuestion, "body.image", "missing image reference");
  if (!(h.width > 0 && h.height > 0)) {
    c.fail(ErrorCode::InvalidQuestion, "body", "image dimensions must be positive");
  }
  if (const auto* r = std::get_if<Rect>(&h.key)) {
    if (!(r->width > 0 && r->height > 0) || !std::isfinite(r->x) || !std::isfinite(r->y)) {
      c.fail(ErrorCode::MalformedKey, "key", "rectangle must have positive finite extent");
    }
  } else {
    const auto& poly = std::get<Polygon>(h.key);
    if (poly.points.size() < 3) c.fail(ErrorCode::MalformedKey, "key", "polygon needs at least 3 points");
    for (const auto& p : poly.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        c.fail(ErrorCode::MalformedKey, "key", "polygon points must be finite");
        break;
      }
    }
  }
}

void check_content(Checker& c, const DragDrop& d) {
  auto items = c.options(d.items, "body.items", 1);
  auto zones = c.options(d.zones, "body.zones", 2);
  c.total_map(d.key, items, zones);
}

void check_content(Checker& c, const SelectLists& s) {
  std::set<std::string> list_ids;
  if (s.lists.empty()) c.fail(ErrorCode::InvalidQuestion, "body.lists", "needs at least 1 list");
  for (std::size_t i = 0; i < s.lists.size(); ++i) {
    const auto& list = s.lists[i];
    const auto path = "body.lists[" + std::to_string(i) + "]";
    if (list.id.empty() || !list_ids.insert(list.id).second) {
      c.fail(ErrorCode::InvalidQuestion, path + ".id", "list ids must be unique and non-empty");
    }
    auto opts = c.options(list.options, path + ".options", 2);
    if (auto it = s.key.find(list.id); it == s.key.end()) {
      c.fail(ErrorCode::MalformedKey, "key", "no key entry for list '" + list.id + "'");
    } else if (!opts.contains(it->second)) {
      c.fail(ErrorCode::MalformedKey, "key",
             "list '" + list.id + "' keyed to undeclared option '" + it->second + "'");
    }
  }
  for (const auto& [id, _] : s.key) {
    if (!list_ids.contains(id)) c.fail(ErrorCode::MalformedKey, "key", "key references undeclared list '" + id + "'");
  }
}

void check_content(Checker& c, const Likert& l) {
  if (l.points < 2 || l.points > 11) c.fail(ErrorCode::InvalidQuestion, "body.points", "scale must have 2..11 points");
  if (!l.labels.empty() && l.labels.size() != static_cast<std::size_t>(l.points)) {
    c.fail(ErrorCode::InvalidQuestion, "body.labels", "labels must match the number of points");
  }
}

bool on_segment(Point p, Point a, Point b) {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  if (cross != 0.0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

std::string_view to_string(QuestionType type) { return kTypeNames[static_cast<std::size_t>(type)]; }

std::optional<QuestionType> parse_question_type(std::string_view s) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == s) return static_cast<QuestionType>(i);
  }
  return std::nullopt;
}

bool contains(const Region& region, Point p) {
  if (const auto* r = std::get_if<Rect>(&region)) {
    return r->x <= p.x && p.x <= r->x + r->width && r->y <= p.y && p.y <= r->y + r->height;
  }
  const auto& pts = std::get<Polygon>(region).points;
  const std::size_t n = pts.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = pts[j];
    const Point b = pts[i];
    if (on_segment(p, a, b)) return true;
    if ((b.y > p.y) != (a.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

std::vector<std::string> part_ids(const Question& q) {
  std::vector<std::string> ids{"question"};
  auto add = [&](const std::vector<Option>& opts) {
    for (const auto& o : opts) ids.push_back(o.id);
  };
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MultipleChoice> || std::is_same_v<T, MultipleResponse>) {
          add(c.options);
        } else if constexpr (std::is_same_v<T, TrueFalse>) {
          ids.insert(ids.end(), {"true", "false"});
        } else if constexpr (std::is_same_v<T, FillBlanks>) {
          ids.insert(ids.end(), c.blanks.begin(), c.blanks.end());
        } else if constexpr (std::is_same_v<T, Matching>) {
          add(c.left);
          add(c.right);
        } else if constexpr (std::is_same_v<T, Sequence>) {
          add(c.items);
        } else if constexpr (std::is_same_v<T, Hotspot>) {
          ids.push_back("region");
        } else if constexpr (std::is_same_v<T, DragDrop>) {
          add(c.items);
          add(c.zones);
        } else if constexpr (std::is_same_v<T, SelectLists>) {
          for (const auto& l : c.lists) {
            ids.push_back(l.id);
            add(l.options);
          }
        }
      },
      q.content);
  return ids;
}

std::vector<Violation> validate_question(const Question& q) {
  Checker c;
  if (q.id.empty()) c.fail(ErrorCode::InvalidQuestion, "id", "empty question id");
  if (!(q.weight > 0.0) || !std::isfinite(q.weight)) {
    c.fail(ErrorCode::NonPositiveWeight, "weight", "weight must be a positive finite number");
  }
  if (q.topics.empty()) c.fail(ErrorCode::InvalidQuestion, "topics", "at least one topic is required");
  std::set<std::string> seen;
  for (const auto& t : q.topics) {
    if (!seen.insert(t).second) c.fail(ErrorCode::InvalidQuestion, "topics", "topic '" + t + "' listed twice");
  }
  std::visit([&](const auto& content) { check_content(c, content); }, q.content);
  if (!q.explanations.empty()) {
    auto parts = part_ids(q);
    std::set<std::string> known(parts.begin(), parts.end());
    for (const auto& [id, _] : q.explanations) {
      if (!known.contains(id)) {
        c.fail(ErrorCode::InvalidQuestion, "explanations", "explanation for unknown part '" + id + "'");
      }
    }
  }
  return c.take();
}

}  // namespace assess
