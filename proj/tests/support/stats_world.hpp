#ifndef GATEKV_TESTS_SUPPORT_STATS_WORLD_HPP
#define GATEKV_TESTS_SUPPORT_STATS_WORLD_HPP

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gatekv/stats/policy.hpp"
#include "gatekv/stats/schema.hpp"
#include "gatekv/store/replica.hpp"

namespace testing {

using namespace gatekv;
using namespace gatekv::stats;

struct Flags {
  bool exercise_open = true;
  bool exam_open = true;
  bool published = false;
};

/// A small course-administration world on one replica: one admin, two
/// exercises with one assistant each, a group with a tutor, a sheet, an exam
/// with an examiner, and students s1/s2. s1 is enrolled everywhere (placed by
/// the admin so that worlds with different flag settings hold identical data
/// otherwise).
struct World {
  Replica r{"r1", ConsistencyMode::causal};
  SecuredRealm realm;
  StatsDecisionProcedure proc;

  explicit World(Flags flags = {}) {
    realm.bootstrap_policies(r, {{root_object(), UserId("admin1"), {kAdminToken}}});
    as("admin1", [&](SecuredTransaction& tx) {
      need(tx.update(root_object(), update_map_key("exercises", add_to_set({"e1", "e2"}))));
      need(tx.update(root_object(), update_map_key("exams", add_to_set({"x1"}))));
      need(tx.assign_policy(exercise_object("e1"), UserId("assistant1"), {kAssistantToken}));
      need(tx.assign_policy(exercise_object("e2"), UserId("assistant2"), {kAssistantToken}));
      need(tx.assign_policy(exam_object("x1"), UserId("examiner1"), {kExaminerToken}));
    });
    as("assistant1", [&](SecuredTransaction& tx) {
      need(tx.update(exercise_object("e1"),
                     update_map_key("attributes", assign_register("Exercise One"))));
      need(tx.update(exercise_object("e1"),
                     update_map_key("registration_open", set_flag(flags.exercise_open))));
      need(tx.update(exercise_object("e1"), update_map_key("groups", add_to_set({"g1", "g2"}))));
      need(tx.update(exercise_object("e1"), update_map_key("sheets", add_to_set({"sh1"}))));
      need(tx.update(group_object("e1", "g1"), update_map_key("day", assign_register("mon"))));
      need(tx.update(sheet_object("e1", "sh1"),
                     update_map_key("name", assign_register("Sheet 1"))));
      need(tx.assign_policy(group_object("e1", "g1"), UserId("tutor1"), {kTutorToken}));
    });
    as("examiner1", [&](SecuredTransaction& tx) {
      need(tx.update(exam_object("x1"),
                     update_map_key("open_registration", set_flag(flags.exam_open))));
      if (flags.published) {
        need(tx.update(exam_object("x1"), update_map_key("published", set_flag(true))));
      }
    });
    // Enrollment placed by the admin so it works under any flag setting.
    as("admin1", [&](SecuredTransaction& tx) {
      need(tx.update(exercise_object("e1"), update_map_key("participants", add_to_set({"s1"}))));
      need(tx.update(group_object("e1", "g1"),
                     update_map_key("participants", add_to_set({"s1"}))));
      need(tx.update(exam_object("x1"), update_map_key("participants", add_to_set({"s1"}))));
    });
    as("s1", [&](SecuredTransaction& tx) {
      need(tx.update(student_object("s1"),
                     update_map_key("name", assign_register("Student One"))));
    });
  }

  template <typename F>
  void as(const Bytes& user, F&& f) {
    SecuredTransaction tx = realm.begin(r, UserId(user), proc);
    f(tx);
    tx.commit();
  }

  static void need(bool ok) {
    if (!ok) throw std::logic_error("world setup: operation unexpectedly denied");
  }

  bool upd(const Bytes& user, const BoundObject& o, UpdateOp op) {
    bool ok = false;
    as(user, [&](SecuredTransaction& tx) { ok = tx.update(o, std::move(op)); });
    return ok;
  }

  bool rd(const Bytes& user, const BoundObject& o) {
    bool ok = false;
    as(user, [&](SecuredTransaction& tx) { ok = tx.read(o).has_value(); });
    return ok;
  }

  bool passign(const Bytes& user, const BoundObject& o, const Bytes& target,
               PermissionSet perms) {
    bool ok = false;
    as(user, [&](SecuredTransaction& tx) {
      ok = tx.assign_policy(o, UserId(target), std::move(perms));
    });
    return ok;
  }

  bool pread(const Bytes& user, const BoundObject& o, const Bytes& target) {
    bool ok = false;
    as(user, [&](SecuredTransaction& tx) { ok = tx.read_policy(o, UserId(target)).has_value(); });
    return ok;
  }
};

inline UpdateOp join(const Bytes& sid) {
  return update_map_key("participants", add_to_set({sid}));
}
inline UpdateOp leave(const Bytes& sid) {
  return update_map_key("participants", remove_from_set({sid}));
}
inline UpdateOp team_add(const Bytes& team, ByteSet members) {
  return update_map_key("teams", update_map_key(team, add_to_set(std::move(members))));
}
inline UpdateOp team_remove(const Bytes& team, ByteSet members) {
  return update_map_key("teams", update_map_key(team, remove_from_set(std::move(members))));
}
inline UpdateOp points(const Bytes& sheet, const Bytes& value) {
  return update_map_key(sheet, assign_register(value));
}

struct MatrixCell {
  const char* label;
  bool expected;
  std::function<bool(World&)> run;
};

/// The role × operation × target decision table. The cells are ordered:
/// allowed updates commit real state changes that later cells build on
/// (membership, flag flips, the published exam result), so run them in
/// sequence against one default-flag World.
inline std::vector<MatrixCell> decision_matrix() {
  auto U = [](const Bytes& user, BoundObject o, UpdateOp op) {
    return [user, o = std::move(o), op = std::move(op)](World& w) { return w.upd(user, o, op); };
  };
  auto R = [](const Bytes& user, BoundObject o) {
    return [user, o = std::move(o)](World& w) { return w.rd(user, o); };
  };
  auto PA = [](const Bytes& user, BoundObject o, const Bytes& target, PermissionSet p) {
    return [user, o = std::move(o), target, p = std::move(p)](World& w) {
      return w.passign(user, o, target, p);
    };
  };
  auto PR = [](const Bytes& user, BoundObject o, const Bytes& target) {
    return
        [user, o = std::move(o), target](World& w) { return w.pread(user, o, target); };
  };

  return {
      // Reads: catalog data is open to every user.
      {"student reads exercise", true, R("s1", exercise_object("e1"))},
      {"outside student reads group", true, R("s2", group_object("e1", "g1"))},
      {"student reads sheet", true, R("s1", sheet_object("e1", "sh1"))},
      {"outside student reads root registry", true, R("s2", root_object())},
      {"student reads exam", true, R("s1", exam_object("x1"))},

      // Reads: personal account data stays with its owner and admins.
      {"student reads own account", true, R("s1", student_object("s1"))},
      {"other student reads account", false, R("s2", student_object("s1"))},
      {"tutor reads student account", false, R("tutor1", student_object("s1"))},
      {"admin reads student account", true, R("admin1", student_object("s1"))},

      // Reads: exercise results are for staff of that group and the student.
      {"student reads own results", true, R("s1", results_object("e1", "g1", "s1"))},
      {"other student reads results", false, R("s2", results_object("e1", "g1", "s1"))},
      {"tutor reads group results", true, R("tutor1", results_object("e1", "g1", "s1"))},
      {"assistant reads results", true, R("assistant1", results_object("e1", "g1", "s1"))},
      {"foreign assistant reads results", false,
       R("assistant2", results_object("e1", "g1", "s1"))},
      {"examiner reads exercise results", false,
       R("examiner1", results_object("e1", "g1", "s1"))},
      {"admin reads results", true, R("admin1", results_object("e1", "g1", "s1"))},

      // Reads: exam results are hidden from students until published.
      {"student reads own unpublished exam result", false,
       R("s1", exam_result_object("x1", "s1"))},
      {"examiner reads own exam's result", true, R("examiner1", exam_result_object("x1", "s1"))},
      {"examiner reads other exam's result", false,
       R("examiner1", exam_result_object("x2", "s1"))},
      {"admin reads exam result", true, R("admin1", exam_result_object("x1", "s1"))},
      {"other student reads exam result", false, R("s2", exam_result_object("x1", "s1"))},

      // Policy reads: own permissions or admin.
      {"student reads own permissions", true, PR("s1", exercise_object("e1"), "s1")},
      {"student reads someone else's permissions", false, PR("s1", exercise_object("e1"), "s2")},
      {"admin reads student permissions", true, PR("admin1", exercise_object("e1"), "s1")},

      // Updates: admins may change anything.
      {"admin updates root registry", true,
       U("admin1", root_object(), update_map_key("exercises", add_to_set({"e3"})))},
      {"admin updates exercise attributes", true,
       U("admin1", exercise_object("e1"), update_map_key("attributes", assign_register("renamed")))},
      {"admin updates student account", true,
       U("admin1", student_object("s1"), update_map_key("email", assign_register("s1@example.org")))},
      {"admin removes exercise field", true,
       U("admin1", exercise_object("e1"), remove_map_key("attributes", CrdtType::mvreg))},

      // Updates: assistants manage their exercise, its groups and sheets.
      {"assistant updates exercise attributes", true,
       U("assistant1", exercise_object("e1"),
         update_map_key("attributes", assign_register("Exercise One")))},
      {"assistant registers group", true,
       U("assistant1", exercise_object("e1"), update_map_key("groups", add_to_set({"g3"})))},
      {"assistant registers sheet", true,
       U("assistant1", exercise_object("e1"), update_map_key("sheets", add_to_set({"sh2"})))},
      {"assistant edits participants", false, U("assistant1", exercise_object("e1"), join("s2"))},
      {"assistant removes exercise field", false,
       U("assistant1", exercise_object("e1"), remove_map_key("attributes", CrdtType::mvreg))},
      {"assistant updates group", true,
       U("assistant1", group_object("e1", "g1"),
         update_map_key("location", assign_register("room 5")))},
      {"assistant updates sheet", true,
       U("assistant1", sheet_object("e1", "sh1"),
         update_map_key("name", assign_register("Sheet 1b")))},
      {"assistant updates root registry", false,
       U("assistant1", root_object(), update_map_key("exercises", add_to_set({"e4"})))},
      {"assistant updates student account", false,
       U("assistant1", student_object("s1"), update_map_key("name", assign_register("hijack")))},
      {"foreign assistant updates exercise", false,
       U("assistant2", exercise_object("e1"),
         update_map_key("attributes", assign_register("not mine")))},

      // Updates: tutors build teams from their group's members and enter
      // results for them.
      {"tutor adds member to team", true,
       U("tutor1", group_object("e1", "g1"), team_add("t1", {"s1"}))},
      {"tutor adds non-member to team", false,
       U("tutor1", group_object("e1", "g1"), team_add("t1", {"s2"}))},
      {"tutor removes member from team", true,
       U("tutor1", group_object("e1", "g1"), team_remove("t1", {"s1"}))},
      {"tutor edits group day", false,
       U("tutor1", group_object("e1", "g1"), update_map_key("day", assign_register("tue")))},
      {"tutor enters member's points", true,
       U("tutor1", results_object("e1", "g1", "s1"), points("sh1", "12"))},
      {"tutor enters non-member's points", false,
       U("tutor1", results_object("e1", "g1", "s2"), points("sh1", "12"))},
      {"tutor enters points in foreign group", false,
       U("tutor1", results_object("e1", "g2", "s1"), points("sh1", "12"))},
      {"assistant enters points", false,
       U("assistant1", results_object("e1", "g1", "s1"), points("sh1", "12"))},

      // Updates: students own their account and their own sign-ups.
      {"student updates own account", true,
       U("s1", student_object("s1"), update_map_key("email", assign_register("s1@uni")))},
      {"student updates other account", false,
       U("s1", student_object("s2"), update_map_key("email", assign_register("s2@uni")))},
      {"student registers for exercise", true, U("s1", exercise_object("e1"), join("s1"))},
      {"student deregisters from exercise", false, U("s1", exercise_object("e1"), leave("s1"))},
      {"student registers someone else", false, U("s1", exercise_object("e1"), join("s2"))},
      {"student joins group while open", true, U("s1", group_object("e1", "g1"), join("s1"))},
      {"student leaves group while open", true, U("s1", group_object("e1", "g1"), leave("s1"))},
      {"student adds someone else to group", false, U("s1", group_object("e1", "g1"), join("s2"))},
      {"student adds self and friend at once", false,
       U("s1", group_object("e1", "g1"), update_map_key("participants", add_to_set({"s1", "s2"})))},
      {"student edits group day", false,
       U("s1", group_object("e1", "g1"), update_map_key("day", assign_register("fri")))},
      {"student joins exam while open", true, U("s1", exam_object("x1"), join("s1"))},
      {"student enters own points", false,
       U("s1", results_object("e1", "g1", "s1"), points("sh1", "20"))},

      // Updates: examiners run their exam and its results.
      {"examiner updates exam attributes", true,
       U("examiner1", exam_object("x1"), update_map_key("attributes", assign_register("Final")))},
      {"examiner enters participant's exam result", true,
       U("examiner1", exam_result_object("x1", "s1"), points("points", "87"))},
      {"examiner enters non-participant's exam result", false,
       U("examiner1", exam_result_object("x1", "s2"), points("points", "87"))},
      {"examiner updates exercise", false,
       U("examiner1", exercise_object("e1"),
         update_map_key("attributes", assign_register("not mine")))},
      {"stranger updates exam", false,
       U("s2", exam_object("x1"), update_map_key("attributes", assign_register("prank")))},

      // Policy assigns: admins anywhere, assistants only the tutor role on
      // groups of their exercise.
      {"admin grants examiner role", true,
       PA("admin1", exam_object("x1"), "examiner2", {kExaminerToken})},
      {"assistant grants tutor role", true,
       PA("assistant1", group_object("e1", "g2"), "tutor2", {kTutorToken})},
      {"assistant grants beyond tutor", false,
       PA("assistant1", group_object("e1", "g2"), "tutor2", {kTutorToken, kAssistantToken})},
      {"assistant grants assistant role", false,
       PA("assistant1", exercise_object("e1"), "assistant3", {kAssistantToken})},
      {"tutor grants tutor role", false,
       PA("tutor1", group_object("e1", "g1"), "tutor3", {kTutorToken})},
      {"student grants himself tutor", false,
       PA("s1", group_object("e1", "g1"), "s1", {kTutorToken})},

      // Flag flips and their consequences: closing registration stops
      // self-service sign-up but nothing else; publishing opens the
      // student's own exam-result read.
      {"assistant closes registration", true,
       U("assistant1", exercise_object("e1"), update_map_key("registration_open", set_flag(false)))},
      {"student joins group while closed", false, U("s1", group_object("e1", "g1"), join("s1"))},
      {"student leaves group while closed", false, U("s1", group_object("e1", "g1"), leave("s1"))},
      {"student still registers for exercise", true, U("s1", exercise_object("e1"), join("s1"))},
      {"assistant still registers group", true,
       U("assistant1", exercise_object("e1"), update_map_key("groups", add_to_set({"g4"})))},
      {"examiner closes exam registration", true,
       U("examiner1", exam_object("x1"), update_map_key("open_registration", set_flag(false)))},
      {"student joins exam while closed", false, U("s2", exam_object("x1"), join("s2"))},
      {"examiner publishes results", true,
       U("examiner1", exam_object("x1"), update_map_key("published", set_flag(true)))},
      {"student reads own published exam result", true,
       R("s1", exam_result_object("x1", "s1"))},
      {"other student still blocked from exam result", false,
       R("s2", exam_result_object("x1", "s1"))},
  };
}

}  // namespace testing

#endif  // GATEKV_TESTS_SUPPORT_STATS_WORLD_HPP
