#ifndef GATEKV_STATS_WORKLOAD_HPP
#define GATEKV_STATS_WORKLOAD_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gatekv/acl/monitor.hpp"
#include "gatekv/stats/schema.hpp"
#include "gatekv/store/replica.hpp"
#include "gatekv/util/rng.hpp"

namespace gatekv::stats {

/// Sizing of the synthetic history. Everything the generator does is a pure
/// function of this struct.
struct WorkloadConfig {
  std::uint64_t seed = 1;
  std::size_t students = 16;
  std::size_t exercises = 2;
  std::size_t groups_per_exercise = 2;
  std::size_t sheets_per_exercise = 3;
  std::size_t exams = 1;
  /// Datastore reads per update the stream is padded towards.
  double read_update_ratio = 3.12;
};

/// One datastore-level operation of the synthetic history. Operations
/// sharing a tx id belong to one transaction of one actor.
struct WorkloadOp {
  enum class Kind { read, update, policy_assign, policy_read };

  std::uint64_t seq = 0;
  std::uint64_t tx = 0;
  Bytes actor;
  Bytes action;  // application action this op is part of
  Kind kind = Kind::read;
  BoundObject target;
  UpdateOp update;           // kind == update
  Bytes target_user;         // policy ops
  PermissionSet permissions;  // kind == policy_assign
};

inline const char* to_string(WorkloadOp::Kind k) {
  switch (k) {
    case WorkloadOp::Kind::read: return "read";
    case WorkloadOp::Kind::update: return "update";
    case WorkloadOp::Kind::policy_assign: return "policy_assign";
    case WorkloadOp::Kind::policy_read: return "policy_read";
  }
  return "?";
}

struct Workload {
  WorkloadConfig config;
  /// Initial grants that must exist before the first transaction.
  std::vector<SecuredRealm::PolicyGrant> bootstrap;
  std::vector<WorkloadOp> ops;

  std::size_t reads() const {
    std::size_t n = 0;
    for (const auto& op : ops) {
      if (op.kind == WorkloadOp::Kind::read || op.kind == WorkloadOp::Kind::policy_read) ++n;
    }
    return n;
  }

  std::size_t updates() const { return ops.size() - reads(); }

  double read_update_ratio() const {
    return updates() == 0 ? 0.0 : static_cast<double>(reads()) / static_cast<double>(updates());
  }
};

inline nlohmann::json update_op_json(const UpdateOp& op) {
  nlohmann::json j;
  if (op.is<RegisterAssign>()) {
    j["op"] = "assign";
    j["value"] = op.as<RegisterAssign>().value;
  } else if (op.is<PolicyAssign>()) {
    j["op"] = "policy_assign";
    j["permissions"] = op.as<PolicyAssign>().permissions;
  } else if (op.is<SetAdd>()) {
    j["op"] = "set_add";
    j["elements"] = op.as<SetAdd>().elements;
  } else if (op.is<SetRemove>()) {
    j["op"] = "set_remove";
    j["elements"] = op.as<SetRemove>().elements;
  } else if (op.is<MapUpdate>()) {
    j["op"] = "map_update";
    j["key"] = op.as<MapUpdate>().key;
    j["nested"] = update_op_json(*op.as<MapUpdate>().nested);
  } else if (op.is<MapRemove>()) {
    j["op"] = "map_remove";
    j["key"] = op.as<MapRemove>().key;
    j["nested_type"] = to_string(op.as<MapRemove>().nested_type);
  } else if (op.is<CounterInc>()) {
    j["op"] = "counter_inc";
    j["delta"] = op.as<CounterInc>().delta;
  } else {
    j["op"] = "flag_set";
    j["value"] = op.as<FlagSet>().value;
  }
  return j;
}

inline nlohmann::json workload_op_json(const WorkloadOp& op) {
  nlohmann::json j;
  j["seq"] = op.seq;
  j["tx"] = op.tx;
  j["actor"] = op.actor;
  j["action"] = op.action;
  j["op"] = to_string(op.kind);
  j["bucket"] = op.target.bucket;
  j["key"] = op.target.key;
  j["type"] = to_string(op.target.type);
  if (op.kind == WorkloadOp::Kind::update) j["payload"] = update_op_json(op.update);
  if (op.kind == WorkloadOp::Kind::policy_assign) {
    j["target_user"] = op.target_user;
    j["permissions"] = op.permissions;
  }
  if (op.kind == WorkloadOp::Kind::policy_read) j["target_user"] = op.target_user;
  return j;
}

/// Line-delimited JSON rendering of the whole stream.
inline std::string workload_jsonl(const Workload& w) {
  std::string out;
  for (const WorkloadOp& op : w.ops) {
    out += workload_op_json(op).dump();
    out += '\n';
  }
  return out;
}

namespace detail {

/// Builds the operation stream phase by phase; one actor transaction per
/// application action.
class WorkloadBuilder {
 public:
  explicit WorkloadBuilder(const WorkloadConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  Workload build() {
    w_.config = cfg_;
    w_.bootstrap = {{root_object(), UserId("admin1"), {kAdminToken}}};

    setup_ids();
    admin_creates_exercises();
    admin_creates_exams();
    assistants_open_registration();
    assistants_create_groups();
    assistants_create_sheets();
    students_register_accounts();
    students_register_exercises();
    students_join_groups();
    students_switch_groups();
    assistants_close_registration();
    tutors_form_teams();
    tutors_enter_points();
    students_view_results();
    exam_lifecycle();
    pad_reads_to_ratio();

    return std::move(w_);
  }

 private:
  struct GroupInfo {
    Bytes gid;
    Bytes tutor;
    std::vector<Bytes> members;
  };
  struct ExerciseInfo {
    Bytes eid;
    Bytes assistant;
    std::vector<GroupInfo> groups;
    std::vector<Bytes> sheets;
  };
  struct ExamInfo {
    Bytes xid;
    Bytes examiner;
    std::vector<Bytes> participants;
  };

  void setup_ids() {
    for (std::size_t i = 1; i <= cfg_.students; ++i) students_.push_back("s" + std::to_string(i));
    for (std::size_t e = 1; e <= cfg_.exercises; ++e) {
      ExerciseInfo ex;
      ex.eid = "e" + std::to_string(e);
      ex.assistant = "assistant" + std::to_string(e);
      for (std::size_t g = 1; g <= cfg_.groups_per_exercise; ++g) {
        GroupInfo gr;
        gr.gid = "g" + std::to_string(g);
        gr.tutor = "tutor" + std::to_string(e) + "_" + std::to_string(g);
        ex.groups.push_back(std::move(gr));
      }
      for (std::size_t s = 1; s <= cfg_.sheets_per_exercise; ++s) {
        ex.sheets.push_back("sh" + std::to_string(s));
      }
      exercises_.push_back(std::move(ex));
    }
    for (std::size_t x = 1; x <= cfg_.exams; ++x) {
      ExamInfo exam;
      exam.xid = "x" + std::to_string(x);
      exam.examiner = "examiner" + std::to_string(x);
      exams_.push_back(std::move(exam));
    }
  }

  void begin_action(const Bytes& actor, const Bytes& action) {
    ++tx_;
    actor_ = actor;
    action_ = action;
  }

  WorkloadOp& push(WorkloadOp::Kind kind, BoundObject target) {
    WorkloadOp op;
    op.seq = w_.ops.size();
    op.tx = tx_;
    op.actor = actor_;
    op.action = action_;
    op.kind = kind;
    op.target = std::move(target);
    w_.ops.push_back(std::move(op));
    return w_.ops.back();
  }

  void read(BoundObject target) { push(WorkloadOp::Kind::read, std::move(target)); }

  void update(BoundObject target, UpdateOp op) {
    push(WorkloadOp::Kind::update, std::move(target)).update = std::move(op);
  }

  void grant(BoundObject target, Bytes user, PermissionSet perms) {
    WorkloadOp& op = push(WorkloadOp::Kind::policy_assign, std::move(target));
    op.target_user = std::move(user);
    op.permissions = std::move(perms);
  }

  void admin_creates_exercises() {
    for (const ExerciseInfo& ex : exercises_) {
      begin_action("admin1", "create-exercise");
      update(root_object(), update_map_key("exercises", add_to_set({ex.eid})));
      update(exercise_object(ex.eid),
             update_map_key("attributes", assign_register("Exercise " + ex.eid)));
      grant(exercise_object(ex.eid), ex.assistant, {kAssistantToken});
    }
  }

  void admin_creates_exams() {
    for (const ExamInfo& exam : exams_) {
      begin_action("admin1", "create-exam");
      update(root_object(), update_map_key("exams", add_to_set({exam.xid})));
      update(exam_object(exam.xid),
             update_map_key("attributes", assign_register("Exam " + exam.xid)));
      grant(exam_object(exam.xid), exam.examiner, {kExaminerToken});
    }
  }

  void assistants_open_registration() {
    for (const ExerciseInfo& ex : exercises_) {
      begin_action(ex.assistant, "open-registration");
      update(exercise_object(ex.eid), update_map_key("registration_open", set_flag(true)));
    }
  }

  void assistants_close_registration() {
    for (const ExerciseInfo& ex : exercises_) {
      begin_action(ex.assistant, "close-registration");
      update(exercise_object(ex.eid), update_map_key("registration_open", set_flag(false)));
    }
  }

  void assistants_create_groups() {
    static const char* days[] = {"mon", "tue", "wed", "thu", "fri"};
    for (ExerciseInfo& ex : exercises_) {
      for (GroupInfo& gr : ex.groups) {
        begin_action(ex.assistant, "create-group");
        update(exercise_object(ex.eid), update_map_key("groups", add_to_set({gr.gid})));
        BoundObject gobj = group_object(ex.eid, gr.gid);
        update(gobj, update_map_key("day", assign_register(days[rng_.below(5)])));
        update(gobj, update_map_key("slot", assign_register(std::to_string(8 + rng_.below(10)) + ":00")));
        update(gobj, update_map_key("location", assign_register("room " + std::to_string(100 + rng_.below(100)))));
        grant(gobj, gr.tutor, {kTutorToken});
        update(gobj, update_map_key("tutors", add_to_set({gr.tutor})));
      }
    }
  }

  void assistants_create_sheets() {
    for (const ExerciseInfo& ex : exercises_) {
      for (const Bytes& shid : ex.sheets) {
        begin_action(ex.assistant, "create-sheet");
        update(exercise_object(ex.eid), update_map_key("sheets", add_to_set({shid})));
        update(sheet_object(ex.eid, shid),
               update_map_key("name", assign_register("Sheet " + shid)));
      }
    }
  }

  void students_register_accounts() {
    for (const Bytes& sid : students_) {
      begin_action(sid, "register-account");
      BoundObject sobj = student_object(sid);
      update(sobj, update_map_key("name", assign_register("Student " + sid)));
      update(sobj, update_map_key("studentid", assign_register(sid)));
      update(sobj, update_map_key("email", assign_register(sid + "@example.org")));
    }
  }

  void students_register_exercises() {
    for (const Bytes& sid : students_) {
      for (const ExerciseInfo& ex : exercises_) {
        begin_action(sid, "register-exercise");
        read(exercise_object(ex.eid));
        update(exercise_object(ex.eid), update_map_key("participants", add_to_set({sid})));
      }
    }
  }

  void students_join_groups() {
    for (const Bytes& sid : students_) {
      for (ExerciseInfo& ex : exercises_) {
        GroupInfo& gr = ex.groups[rng_.below(ex.groups.size())];
        begin_action(sid, "join-group");
        read(exercise_object(ex.eid));
        update(group_object(ex.eid, gr.gid),
               update_map_key("participants", add_to_set({sid})));
        gr.members.push_back(sid);
      }
    }
  }

  void students_switch_groups() {
    for (std::size_t i = 0; i + 4 < students_.size(); i += 5) {
      const Bytes& sid = students_[i];
      for (ExerciseInfo& ex : exercises_) {
        if (ex.groups.size() < 2) continue;
        std::size_t from = 0;
        while (from < ex.groups.size()) {
          auto& members = ex.groups[from].members;
          if (std::find(members.begin(), members.end(), sid) != members.end()) break;
          ++from;
        }
        if (from == ex.groups.size()) continue;
        std::size_t to = (from + 1) % ex.groups.size();
        begin_action(sid, "switch-group");
        read(exercise_object(ex.eid));
        update(group_object(ex.eid, ex.groups[from].gid),
               update_map_key("participants", remove_from_set({sid})));
        update(group_object(ex.eid, ex.groups[to].gid),
               update_map_key("participants", add_to_set({sid})));
        auto& from_members = ex.groups[from].members;
        from_members.erase(std::find(from_members.begin(), from_members.end(), sid));
        ex.groups[to].members.push_back(sid);
      }
    }
  }

  void tutors_form_teams() {
    for (const ExerciseInfo& ex : exercises_) {
      for (const GroupInfo& gr : ex.groups) {
        if (gr.members.empty()) continue;
        begin_action(gr.tutor, "form-teams");
        read(group_object(ex.eid, gr.gid));
        ByteSet team_a, team_b;
        for (std::size_t i = 0; i < gr.members.size(); ++i) {
          (i % 2 == 0 ? team_a : team_b).insert(gr.members[i]);
        }
        BoundObject gobj = group_object(ex.eid, gr.gid);
        if (!team_a.empty()) {
          update(gobj, update_map_key("teams", update_map_key("t1", add_to_set(team_a))));
        }
        if (!team_b.empty()) {
          update(gobj, update_map_key("teams", update_map_key("t2", add_to_set(team_b))));
        }
      }
    }
  }

  void tutors_enter_points() {
    for (const ExerciseInfo& ex : exercises_) {
      for (const GroupInfo& gr : ex.groups) {
        for (const Bytes& shid : ex.sheets) {
          std::size_t n = 0;
          for (const Bytes& sid : gr.members) {
            begin_action(gr.tutor, "enter-points");
            BoundObject robj = results_object(ex.eid, gr.gid, sid);
            if (n++ % 3 == 0) read(robj);
            update(robj, update_map_key(shid, assign_register(std::to_string(rng_.below(21)))));
          }
        }
      }
    }
  }

  void students_view_results() {
    for (int round = 0; round < 2; ++round) {
      for (const ExerciseInfo& ex : exercises_) {
        for (const GroupInfo& gr : ex.groups) {
          for (const Bytes& sid : gr.members) {
            begin_action(sid, "view-results");
            read(results_object(ex.eid, gr.gid, sid));
          }
        }
      }
    }
  }

  void exam_lifecycle() {
    for (ExamInfo& exam : exams_) {
      begin_action(exam.examiner, "open-exam-registration");
      update(exam_object(exam.xid), update_map_key("open_registration", set_flag(true)));

      for (const Bytes& sid : students_) {
        begin_action(sid, "register-exam");
        read(exam_object(exam.xid));
        update(exam_object(exam.xid), update_map_key("participants", add_to_set({sid})));
        exam.participants.push_back(sid);
      }

      for (const Bytes& sid : exam.participants) {
        begin_action(exam.examiner, "enter-exam-result");
        BoundObject robj = exam_result_object(exam.xid, sid);
        update(robj, update_map_key("points", assign_register(std::to_string(rng_.below(101)))));
        update(robj, update_map_key("grade", assign_register(std::to_string(1 + rng_.below(5)))));
      }

      begin_action(exam.examiner, "publish-exam");
      update(exam_object(exam.xid), update_map_key("published", set_flag(true)));

      for (const Bytes& sid : exam.participants) {
        begin_action(sid, "view-exam-result");
        read(exam_result_object(exam.xid, sid));
      }
    }
  }

  /// Tops the stream up with read-only browsing until the read/update mix
  /// reaches the configured ratio.
  void pad_reads_to_ratio() {
    std::size_t updates = w_.updates();
    std::size_t reads = w_.reads();
    auto want = static_cast<std::size_t>(
        std::llround(cfg_.read_update_ratio * static_cast<double>(updates)));
    std::size_t student_index = 0;
    while (reads < want) {
      const Bytes& sid = students_[student_index % students_.size()];
      const ExerciseInfo& ex = exercises_[student_index % exercises_.size()];
      begin_action(sid, "browse");
      read(exercise_object(ex.eid));
      ++reads;
      if (reads < want) {
        const GroupInfo& gr = ex.groups[student_index % ex.groups.size()];
        read(group_object(ex.eid, gr.gid));
        ++reads;
      }
      if (reads < want) {
        read(sheet_object(ex.eid, ex.sheets[student_index % ex.sheets.size()]));
        ++reads;
      }
      ++student_index;
    }
  }

  WorkloadConfig cfg_;
  Rng rng_;
  Workload w_;
  std::uint64_t tx_ = 0;
  Bytes actor_;
  Bytes action_;
  std::vector<Bytes> students_;
  std::vector<ExerciseInfo> exercises_;
  std::vector<ExamInfo> exams_;
};

}  // namespace detail

inline Workload generate_workload(const WorkloadConfig& cfg) {
  return detail::WorkloadBuilder(cfg).build();
}

/// Smallest student count whose generated stream reaches at least
/// target_ops operations; the other dimensions stay at their defaults.
inline WorkloadConfig config_for_target_ops(std::size_t target_ops, std::uint64_t seed = 1) {
  WorkloadConfig cfg;
  cfg.seed = seed;
  std::size_t lo = 4, hi = 4096;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    cfg.students = mid;
    if (generate_workload(cfg).ops.size() < target_ops) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  cfg.students = lo;
  return cfg;
}

/// Runs one workload operation inside the given secured transaction.
inline bool apply_app_operation(SecuredTransaction& stx, const WorkloadOp& op) {
  switch (op.kind) {
    case WorkloadOp::Kind::read:
      return stx.read(op.target).has_value();
    case WorkloadOp::Kind::update:
      return stx.update(op.target, op.update);
    case WorkloadOp::Kind::policy_assign:
      return stx.assign_policy(op.target, UserId(op.target_user), op.permissions);
    case WorkloadOp::Kind::policy_read:
      return stx.read_policy(op.target, UserId(op.target_user)).has_value();
  }
  return false;
}

/// Replays the whole stream on one replica, one secured transaction per tx
/// group. Returns the number of denied operations; commits are handed to
/// `sink` if given.
inline std::uint64_t replay_workload(SecuredRealm& realm, Replica& replica,
                                     DecisionProcedure& proc, const Workload& w,
                                     std::vector<Commit>* sink = nullptr) {
  std::uint64_t denials = 0;
  std::size_t i = 0;
  while (i < w.ops.size()) {
    const std::uint64_t tx = w.ops[i].tx;
    SecuredTransaction stx = realm.begin(replica, UserId(w.ops[i].actor), proc);
    while (i < w.ops.size() && w.ops[i].tx == tx) {
      if (!apply_app_operation(stx, w.ops[i])) ++denials;
      ++i;
    }
    Commit c = stx.commit();
    if (sink) sink->push_back(std::move(c));
  }
  return denials;
}

}  // namespace gatekv::stats

#endif  // GATEKV_STATS_WORKLOAD_HPP
