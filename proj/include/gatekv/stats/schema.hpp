#ifndef GATEKV_STATS_SCHEMA_HPP
#define GATEKV_STATS_SCHEMA_HPP

#include <vector>

#include "gatekv/crdt/state.hpp"
#include "gatekv/store/bound_object.hpp"
#include "gatekv/util/bytes.hpp"

namespace gatekv::stats {

// Student achievement tracking data model. Everything lives in one bucket as
// map objects; keys encode the hierarchy:
//
//   root                                admin registry (exercise/exam ids)
//   student/<sid>                       personal data
//   exercise/<eid>                      attributes, registration flag,
//                                       participants, group and sheet ids
//   group/<eid>/<gid>                   slot/day/location, tutors,
//                                       participants, teams
//   sheet/<eid>/<shid>                  sheet metadata
//   results/<eid>/<gid>/<sid>           sheet id -> achieved points
//   exam/<xid>                          attributes, registration and publish
//                                       flags, participants, tasks, grades
//   examresult/<xid>/<sid>              points and grade
//
// Roles are permission tokens on the layer objects: "admin" on root,
// "assistant" on the exercise, "tutor" on the group, "examiner" on the exam.

inline constexpr const char* kBucket = "stats";

inline constexpr const char* kAdminToken = "admin";
inline constexpr const char* kAssistantToken = "assistant";
inline constexpr const char* kTutorToken = "tutor";
inline constexpr const char* kExaminerToken = "examiner";

inline constexpr const char* kRootLayer = "root";
inline constexpr const char* kExerciseLayer = "exercise";
inline constexpr const char* kGroupLayer = "group";
inline constexpr const char* kExamLayer = "exam";

inline BoundObject root_object() { return {kBucket, "root", CrdtType::map}; }

inline BoundObject student_object(const Bytes& sid) {
  return {kBucket, "student/" + sid, CrdtType::map};
}

inline BoundObject exercise_object(const Bytes& eid) {
  return {kBucket, "exercise/" + eid, CrdtType::map};
}

inline BoundObject group_object(const Bytes& eid, const Bytes& gid) {
  return {kBucket, "group/" + eid + "/" + gid, CrdtType::map};
}

inline BoundObject sheet_object(const Bytes& eid, const Bytes& shid) {
  return {kBucket, "sheet/" + eid + "/" + shid, CrdtType::map};
}

inline BoundObject results_object(const Bytes& eid, const Bytes& gid, const Bytes& sid) {
  return {kBucket, "results/" + eid + "/" + gid + "/" + sid, CrdtType::map};
}

inline BoundObject exam_object(const Bytes& xid) {
  return {kBucket, "exam/" + xid, CrdtType::map};
}

inline BoundObject exam_result_object(const Bytes& xid, const Bytes& sid) {
  return {kBucket, "examresult/" + xid + "/" + sid, CrdtType::map};
}

struct ParsedKey {
  enum class Kind {
    root,
    student,
    exercise,
    group,
    sheet,
    results,
    exam,
    exam_result,
    unknown,
  };
  Kind kind = Kind::unknown;
  Bytes eid, gid, shid, sid, xid;
};

/// Splits an object key into its hierarchy parts. Anything that does not
/// match the documented shapes parses as unknown; decisions treat unknown
/// objects as admin-only.
inline ParsedKey parse_key(const Bytes& key) {
  std::vector<Bytes> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t slash = key.find('/', start);
    if (slash == Bytes::npos) {
      parts.push_back(key.substr(start));
      break;
    }
    parts.push_back(key.substr(start, slash - start));
    start = slash + 1;
  }
  for (const Bytes& p : parts) {
    if (p.empty()) return {};
  }

  ParsedKey out;
  using Kind = ParsedKey::Kind;
  if (parts.size() == 1 && parts[0] == "root") {
    out.kind = Kind::root;
  } else if (parts.size() == 2 && parts[0] == "student") {
    out.kind = Kind::student;
    out.sid = parts[1];
  } else if (parts.size() == 2 && parts[0] == "exercise") {
    out.kind = Kind::exercise;
    out.eid = parts[1];
  } else if (parts.size() == 3 && parts[0] == "group") {
    out.kind = Kind::group;
    out.eid = parts[1];
    out.gid = parts[2];
  } else if (parts.size() == 3 && parts[0] == "sheet") {
    out.kind = Kind::sheet;
    out.eid = parts[1];
    out.shid = parts[2];
  } else if (parts.size() == 4 && parts[0] == "results") {
    out.kind = Kind::results;
    out.eid = parts[1];
    out.gid = parts[2];
    out.sid = parts[3];
  } else if (parts.size() == 2 && parts[0] == "exam") {
    out.kind = Kind::exam;
    out.xid = parts[1];
  } else if (parts.size() == 3 && parts[0] == "examresult") {
    out.kind = Kind::exam_result;
    out.xid = parts[1];
    out.sid = parts[2];
  }
  return out;
}

/// Value of a flag field inside a map object's read; absent fields are false.
inline bool flag_field(const ReadResult& object, const Bytes& field) {
  auto it = object.entries.find(MapEntryKey{field, CrdtType::flag});
  return it != object.entries.end() && it->second.flag;
}

/// Elements of a set field inside a map object's read; absent fields are
/// empty.
inline ByteSet set_field(const ReadResult& object, const Bytes& field) {
  auto it = object.entries.find(MapEntryKey{field, CrdtType::orset});
  return it == object.entries.end() ? ByteSet{} : it->second.values;
}

}  // namespace gatekv::stats

#endif  // GATEKV_STATS_SCHEMA_HPP
