#ifndef GATEKV_STATS_POLICY_HPP
#define GATEKV_STATS_POLICY_HPP

#include <any>

#include "gatekv/acl/monitor.hpp"
#include "gatekv/constraints/constraint.hpp"
#include "gatekv/stats/schema.hpp"

namespace gatekv::stats {

// Access rules of the tracking system, translated to the data update level.
//
// Updates: admins may do anything. Assistants manage their exercise (its
// attributes, the registration flag, the group and sheet registries), its
// group and sheet objects, and the tutor grants on its groups. Tutors assign
// students of their own group to teams and enter results for students of
// their group. Examiners manage their own exam and its per-student results.
// Students manage their own account, may always add themselves to an
// exercise's participants, may sign up for or out of a group only while the
// exercise registration is open, and likewise for exams that are open for
// self-registration.
//
// Reads: the original system restricted updates only, so plain catalog data
// (exercises, groups, sheets, exams, the root registry) stays readable by
// any user. The added read rules cover results: assistants and tutors see
// the results of their groups, examiners only those of their own exams, and
// students only their personal results, with exam results visible to them
// only once published. Personal account data is readable by its owner and
// admins; the rules do not say anything else, so nobody else gets it.
//
// Policy state: everyone may read their own permissions, admins everybody's.
// Policy assigns are admin business, except that assistants grant or revoke
// the tutor role on groups of their exercise.
class StatsDecisionProcedure final : public DecisionProcedure {
 public:
  bool decide_read(const UserId& user, const BoundObject& object, const std::any&,
                   const SecurityLayers& layers) override {
    if (layers.layer_grants(kRootLayer, kAdminToken)) return true;
    const ParsedKey key = parse_key(object.key);
    using Kind = ParsedKey::Kind;
    switch (key.kind) {
      case Kind::root:
      case Kind::exercise:
      case Kind::group:
      case Kind::sheet:
      case Kind::exam:
        return true;
      case Kind::student:
        return user.id == key.sid;
      case Kind::results:
        if (layers.layer_grants(kExerciseLayer, kAssistantToken)) return true;
        if (layers.layer_grants(kGroupLayer, kTutorToken)) return true;
        return user.id == key.sid;
      case Kind::exam_result:
        if (layers.layer_grants(kExamLayer, kExaminerToken)) return true;
        if (user.id != key.sid) return false;
        // Publishing is what exposes exam results to their owners.
        return flag_field(layers.data(kExamLayer), "published");
      default:
        return false;
    }
  }

  bool decide_update(const UserId& user, const BoundObject& object, const UpdateOp& op,
                     const std::any&, const SecurityLayers& layers) override {
    if (layers.layer_grants(kRootLayer, kAdminToken)) return true;
    const ParsedKey key = parse_key(object.key);
    using Kind = ParsedKey::Kind;
    switch (key.kind) {
      case Kind::student:
        return user.id == key.sid;
      case Kind::exercise: {
        if (layers.layer_grants(kExerciseLayer, kAssistantToken) &&
            applies_to(assistant_exercise_rule(), op)) {
          return true;
        }
        // Anyone may register themself; the flag gates only group sign-up.
        return applies_to(self_register_rule(user.id), op);
      }
      case Kind::group: {
        if (layers.layer_grants(kExerciseLayer, kAssistantToken)) return true;
        if (layers.layer_grants(kGroupLayer, kTutorToken)) {
          return tutor_team_update(op, set_field(layers.data(kGroupLayer), "participants"));
        }
        if (applies_to(participation_rule(user.id), op)) {
          return flag_field(layers.data(kExerciseLayer), "registration_open");
        }
        return false;
      }
      case Kind::sheet:
        return layers.layer_grants(kExerciseLayer, kAssistantToken);
      case Kind::results:
        return layers.layer_grants(kGroupLayer, kTutorToken) &&
               set_field(layers.data(kGroupLayer), "participants").count(key.sid) != 0;
      case Kind::exam: {
        if (layers.layer_grants(kExamLayer, kExaminerToken)) return true;
        if (applies_to(participation_rule(user.id), op)) {
          return flag_field(layers.data(kExamLayer), "open_registration");
        }
        return false;
      }
      case Kind::exam_result:
        return layers.layer_grants(kExamLayer, kExaminerToken) &&
               set_field(layers.data(kExamLayer), "participants").count(key.sid) != 0;
      default:
        return false;
    }
  }

  bool decide_policy_read(const UserId& user, const BoundObject&, const UserId& target,
                          const std::any&, const SecurityLayers& layers) override {
    return layers.layer_grants(kRootLayer, kAdminToken) || user == target;
  }

  bool decide_policy_assign(const UserId&, const BoundObject& object, const UserId&,
                            const PermissionSet& new_permissions, const PermissionSet&,
                            const std::any&, const SecurityLayers& layers) override {
    if (layers.layer_grants(kRootLayer, kAdminToken)) return true;
    const ParsedKey key = parse_key(object.key);
    if (key.kind == ParsedKey::Kind::group &&
        layers.layer_grants(kExerciseLayer, kAssistantToken)) {
      // Assistants hand out and take back the tutor role on their groups,
      // nothing stronger.
      for (const Bytes& token : new_permissions) {
        if (token != kTutorToken) return false;
      }
      return true;
    }
    return false;
  }

  LayerDefinition requested_policies(const UserId&, const BoundObject& object) override {
    const ParsedKey key = parse_key(object.key);
    using Kind = ParsedKey::Kind;
    LayerDefinition def;
    def.layers.emplace_back(kRootLayer, root_object());
    switch (key.kind) {
      case Kind::exercise:
        def.layers.emplace_back(kExerciseLayer, exercise_object(key.eid));
        break;
      case Kind::group:
        def.layers.emplace_back(kExerciseLayer, exercise_object(key.eid));
        def.layers.emplace_back(kGroupLayer, group_object(key.eid, key.gid));
        break;
      case Kind::sheet:
        def.layers.emplace_back(kExerciseLayer, exercise_object(key.eid));
        break;
      case Kind::results:
        def.layers.emplace_back(kExerciseLayer, exercise_object(key.eid));
        def.layers.emplace_back(kGroupLayer, group_object(key.eid, key.gid));
        break;
      case Kind::exam:
      case Kind::exam_result:
        def.layers.emplace_back(kExamLayer, exam_object(key.xid));
        break;
      default:
        break;
    }
    return def;
  }

  /// The sign-up/sign-out rule: a map update touching only "participants",
  /// whose nested set update either adds only the user's own id without
  /// removals or removes only it without additions.
  static Constraint participation_rule(const Bytes& userid) {
    return is_map_update(all_of({
        assigns_only({"participants"}),
        constrain_assigns({key_constrain(
            "participants",
            is_set_update(any_of({
                all_of({set_adds_only({userid}), no_set_removes()}),
                all_of({set_removes_only({userid}), no_set_adds()}),
            })))}),
        no_map_removes(),
    }));
  }

  /// Exercise registration is add-only: students may always join, leaving is
  /// not part of the rules.
  static Constraint self_register_rule(const Bytes& userid) {
    return is_map_update(all_of({
        assigns_only({"participants"}),
        constrain_assigns({key_constrain(
            "participants",
            is_set_update(all_of({set_adds_only({userid}), no_set_removes()})))}),
        no_map_removes(),
    }));
  }

  /// Fields of the exercise object assistants may touch. Group and sheet
  /// deletion happens inside the "groups"/"sheets" registries, which stays
  /// within these bindings.
  static Constraint assistant_exercise_rule() {
    return is_map_update(all_of({
        assigns_only({"attributes", "registration_open", "groups", "sheets"}),
        no_map_removes(),
    }));
  }

 private:
  /// Tutors build teams from members of their own group: the op must update
  /// a team inside "teams", and any added member has to be a participant.
  static bool tutor_team_update(const UpdateOp& op, const ByteSet& participants) {
    if (!op.is<MapUpdate>() || op.as<MapUpdate>().key != "teams") return false;
    const UpdateOp& team_level = *op.as<MapUpdate>().nested;
    if (!team_level.is<MapUpdate>()) return false;
    const UpdateOp& member_op = *team_level.as<MapUpdate>().nested;
    if (member_op.is<SetAdd>()) {
      for (const Bytes& member : member_op.as<SetAdd>().elements) {
        if (!participants.count(member)) return false;
      }
      return true;
    }
    return member_op.is<SetRemove>();
  }
};

}  // namespace gatekv::stats

#endif  // GATEKV_STATS_POLICY_HPP
