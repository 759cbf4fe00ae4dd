// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sgg/scene_graph.hpp"

namespace sgg::prompts {

// System message for the PDDL grounding task.
inline constexpr const char* kSystemPddl =
    "You are a helpful assistant who is an expert at assigning robots PDDL planning goals "
    "based on natural language commands grounded in 3D scene graphs. You have access to a "
    "database representing a 3D scene graph, which stores spatial information that a robot "
    "can use to understand the world. Given a command, your task is to generate a Cypher "
    "query that queries the relevant information from the database. Then, use this "
    "information to formulate a PDDL goal for a robot. Given a 3D Scene Graph and an "
    "instruction, use the provided tool to query information from the scene graph. When you "
    "have enough information, submit your final answer. You can call the cypher query tool "
    "up to 5 times. Explain your reasoning before each Cypher query. When producing a final "
    "answer, follow the format and be concise.";

// System message for the question-answering task.
inline constexpr const char* kSystemQa =
    "You are a helpful assistant who is an expert at answering questions about 3D scene "
    "graphs. You have access to a database representing a 3D scene graph, which stores "
    "spatial information that a robot can use to understand the world. Given a question, "
    "your task is to generate a Cypher query that queries the relevant information from the "
    "database. Then, use this information to answer the question. Given a 3D Scene Graph "
    "and a question, use the provided tool to query information from the scene graph. When "
    "you have enough information, submit your final answer. You can call the cypher query "
    "tool up to 5 times. Explain your reasoning before each Cypher query. When producing a "
    "final answer, follow the format and be concise.";

inline constexpr const char* kSceneGraphDescription =
    R"(<Scene Graph Description> A 3D scene graph is a hierarchical graph consisting of layers that each contain nodes. Graphs have the 2D Places layer, the 3D Places layer, the Objects layer, and the Rooms layer.

3D Places Layer (PLACES): The 3D Places layer in the scene graph contains places that are reachable locations in the world. Each Place node has a unique ID (p<id>). Note that the unique ID uses a lowercase 'p' for the 3D Places layer. The term for a node in this layer is a 'Place' node, NOT a 'Mesh Place' node.

2D Places Layer (MESH_PLACES): The 2D Places layer contains Places that are reachable locations in the world with a possible semantic class (type). Each Place node has a unique ID (P<id>). Note that the unique ID uses an uppercase 'P' for the 2D Places layer. The term for a node in this layer is a 'Mesh Place' node, NOT a 'Place' node.

Objects Layer (OBJECTS): The Objects layer contains Objects that exist in the world. Each Object has a unique ID (O<id>), a semantic class (type), an x,y,z position (pos), and a parent. The parent can be a Place or a Mesh Place, indicating which Place or Mesh Place the Object belongs to. Each Object will be represented in the form: (id, type, pos, parent_place).

Rooms Layer (ROOMS): The Rooms Layer contains Rooms that exist in the world. Each Room has a unique ID (R<id>), a semantic class (type), and an x,y,z position (pos). Each Room will be represented in the form: (R<id>, type, pos).

A graph can have either a 2D Places Layer, or a 3D Places Layer, or both. The hierarchy is strict: an Object's parent is always a Place or Mesh Place. A Place's parent is always a Room. Therefore, to find all objects in a room, you must first find all places that are children of that room, and then find all objects that have one of those places as a parent. </Scene Graph Description>)";

// Cypher interface description: the database schema handed to the model.
inline constexpr const char* kDatabaseSchema =
    R"(Labels in Database:
    - Object: a node representing an object in the world.
        - nodeSymbol: a unique string identifier
        - class: a string identifying the object's semantic class or type
        - center: the 3D position of the object, as a POINT type
    - MeshPlace: a node representing a 2D segment of space the robot might be
                 able to move to.
        - nodeSymbol: a unique string identifier
        - class: a string identifying the place's semantic class or type
        - center: the 3D position of the mesh place, as a POINT type
    - Place: a node representing a 3D region of free space
        - nodeSymbol: a unique string identifier
        - center: the 3D position of the place, as a POINT type
    - Room: a node representing a room or higher-level region
        - nodeSymbol: a unique string identifier
        - class: a string identifying the room's semantic class or type
        - center: the 3D position of the room, as a POINT type

Object, MeshPlace, Place, and Room are all Cypher labels attached to nodes.

Places and Mesh Places represent a higher level of the hierarchy compared to objects, but lower level than rooms.

There are two kinds of existing edges. First is (a)-[:CONTAINS]->(b), which connects nodes between different layers and means that b is contained within a. Nodes in higher levels of the hierarchy may contain nodes in lower levels of the hierarchy, but nodes in the lower level of the hierarchy will not contain higher-level nodes. The other kind of edges represent connectivity within a layer: [:OBJECT_CONNECTED], [:PLACE_CONNECTED], [:MESH_PLACE_CONNECTED], [:ROOM_CONNECTED]. Remember that (a)-[:CONTAINS*]->(b) will match transitive relationships.

Note that in the current version of cypher, `distance` has been replaced by `point.distance`. Also, do not use any apoc functions in your queries.)";

inline constexpr const char* kPddlDomain =
    R"(<PDDL Domain>

The PDDL domain consists of the following predicates described below. These predicates get parameterized by symbols from a 3D scene graph. (visited-place ?P): This predicate indicates that a robot must visit Place '?P' at some point, where '?P' is a placeholder for a Place ID. (at-place ?P): This predicate indicates that a robot must be at Place '?P', where '?P' is a placeholder for a Place ID. (visited-object ?O): This predicate indicates that a robot must visit Object '?O' at some point, where '?O' is a placeholder for an Object ID. (at-object ?O): This predicate indicates that a robot must be at Object '?O', where '?O' is a placeholder for an Object ID. (safe ?O): This predicate indicates that a robot must inspect Object '?O', where '?O' is a placeholder for an Object ID. (visited-room ?R): This predicate indicates that a robot must visit Room '?R' at some point, where '?R' is a placeholder for a Room ID. (in-room ?R): This predicate indicates that a robot must be at Room '?R', where '?R' is a placeholder for a Room ID. The 'at' and 'visited' predicates are useful for specifying locations for robots to go. When an instruction indicates an order, you should use (at-place ?P), (at-object ?O), or (in-room ?R) to specify the final goal and (visited-place ?P), (visited-object ?O), or (visited-room ?R) to specify the intermediate goals.

(holding ?O): This predicate indicates the a robot must be holding an Object '?O', where '?O' is a placeholder for an Object ID. The 'holding' predicate is useful for specifying that a robot should pick up an object.

(object-in-place ?O ?P): This predicate indicates that an Object '?O' must be located inside a Place '?P', where '?O' is a placeholder for an Object ID and '?P' is a placeholder for a Place ID. The 'object-in-place' predicate is useful for specifying that a robot should place an object somewhere. If the robot should move an object from one place to another, you should use the 'object-in-place' predicate for the goal instead of the 'holding' predicate.

You can compose PDDL goal predicates into more complex goals using the following operators: not: the 'not' operator negates the truth value of the predicate. For example '(not (visited-room R1))' means Room 'R1' should not be visited. and: the 'and' operator is used to indicate that multiple predicates must be true. For example '(and (visited-room R1) (visited-object O1))' means both Room 'R1' and Object 'O1' must be visited. or: the 'or' operator is used to indicate that either one predicate or another predicate must be true. For example '(or (visited-room R1) (visited-object O1))' means that either Room 'R1' or Object 'O1' must be visited. If an instruction is not specific about which object, place, mesh place, or room that it is referring to, you MUST use the 'or' operator to construct a PDDL goal. This lets the planner determine which goal to achieve.

</PDDL Domain>)";

inline constexpr const char* kPddlExamplesHeader =
    "The following is a set of examples of mapping instructions to PDDL goals (assuming the "
    "results of a Cypher query).";

inline const std::vector<std::pair<std::string, std::string>>& pddl_examples() {
  static const std::vector<std::pair<std::string, std::string>> kPairs = {
      {"Instruction: Head to place 100.", "<answer>(visited-place P100)</answer>"},
      {"Instruction: Move over to the trash.", "<answer>(visited-object O15)</answer>"},
      {"Instruction: Go to room 1.", "<answer>(visited-room R1)</answer>"},
      {"Instruction: Inspect the trash.", "<answer>(safe O15)</answer>"},
      {"Instruction: Pick up the box", "<answer>(holding O120)</answer>"},
      {"Instruction: Move the box to mesh place 11.",
       "<answer>(object-in-place O120 P11)</answer>"},
      {"Instruction: First pick up the box and then head over to the trash.",
       "<answer>(and (holding O120) (at-object O15))</answer>"},
      {"Instruction: Move to one of the poles on the sidewalk.",
       "<answer>(or (visited-object O155) (visited-object O160) (visited-object "
       "O185))</answer>"},
      {"Instruction: Go pick up one of the poles on the sidewalk.",
       "<answer>(or (holding O155) (holding O160) (holding O185))</answer>"},
  };
  return kPairs;
}

inline constexpr const char* kQaExamplesHeader =
    "The following is a set of examples of answering questions about a 3D scene graph "
    "(assuming the results of a Cypher query).";

inline const std::vector<std::pair<std::string, std::string>>& qa_examples() {
  static const std::vector<std::pair<std::string, std::string>> kPairs = {
      {"Question: How many objects are in the scene graph?", "<answer>8</answer>"},
      {"Question: What kinds of objects are in the scene graph?",
       "<answer><tree, vehicle, door, boat, seating></answer>"},
      {"Question: Where is object 5?", "<answer>POINT(1.34 3.28 -0.2)</answer>"},
      {"Question: How many objects of each type are in the parking lot?",
       "<answer>{tree: 1, vehicle: 1, door: 1}</answer>"},
  };
  return kPairs;
}

inline constexpr const char* kPddlTransition = "Now, generate a PDDL goal for this command:";
inline constexpr const char* kQaTransition = "Now, answer this question about the scene graph:";

inline constexpr const char* kPddlFooter =
    "Make your answer as concise as possible\n"
    "Return the PDDL goal between two answer tags, e.g. <answer> pddl goes here </answer>";

inline constexpr const char* kQaFooterPrefix =
    R"(### Syntax
A primitive string is a sequence of alphanumeric characters (with no quotation).
A primitive number is a floating point representation of a number.
A `list` is written as `[element1, element2, ... elementN]`
A `set` is written as `<element1, element2, ... elementN>`
A `dict` is written as `{k1: v1, k2: v2}`
A `point` is written as `POINT(x y z)` (note the lack of comma)
### Denoting Final Answer:
Format your final answer (*not* any intermediate tool calls) as an SLDP
expression wrapped between <answer> and </answer> tags, such as
<answer><1,2,3></answer>. Only a single pair of answer tags should appear in
your solution.
Your answer should be an SLDP )";

// Interface description used by the context-window baseline in place of the
// database schema.
inline constexpr const char* kContextInterfaceNotes =
    R"(<scene_graph_notes>
Objects Layer: The Objects layer contains Objects that exist in the world. Each Object has a unique ID (id), a semantic class (type), an x,y,z position (pos), and a set of parent Places (parent_places). The parent Places indicate which Places the Object belongs to. Each Object will be represented in the form: (id, type, pos, parent_places).
Places / Mesh Places Layer: The Places / Mesh Places layer contains Places that are reachable locations in the world. Each Place node has a unique ID (id), a set of sibling Places (siblings) and a set of parent Rooms (parent_rooms). Each Place will be represented in the form (id, siblings, parent_rooms).
Rooms Layer: The Rooms Layer contains Rooms that exist in the world. Each Room has a unique ID (id), a semantic class (type), an x,y,z position (pos), and a set of sibling Rooms (siblings). Each Room will be represented in the form: (id, type, pos, siblings).
</scene_graph_notes>)";

inline std::string labelspace_description(const Labelspace& labels) {
  auto join = [](const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out += " ";
      out += xs[i];
    }
    return out;
  };
  return "<Labelspace Description>\n"
         "These are the labels available in the scene graph at each layer. Synonyms should "
         "be mapped to a label in the the list.\n\n"
         "<object_labels> " + join(labels.objects) + " </object_labels>\n\n"
         "<room_labels> " + join(labels.rooms) + " </room_labels>\n\n"
         "<mesh_places_labels> " + join(labels.mesh_places) + " </mesh_places_labels>\n\n"
         "</Labelspace Description>";
}

}  // namespace sgg::prompts
