"""The default drone skill set.

Seventeen low-level skills bound to simulator backend methods, four
high-level skills written in MiniSpec, a minimal `goto`, and the `scan` /
`scan_abstract` name aliases. Registration order matters: abbreviations are
generated first-come-first-served.
"""

from .skills import SkillArg, SkillRegistry

LOW_LEVEL = [
    ("move_forward", [("distance", "int")], "Move forward by a distance"),
    ("move_backward", [("distance", "int")], "Move backward by a distance"),
    ("move_left", [("distance", "int")], "Move left by a distance"),
    ("move_right", [("distance", "int")], "Move right by a distance"),
    ("move_up", [("distance", "int")], "Move up by a distance"),
    ("move_down", [("distance", "int")], "Move down by a distance"),
    ("turn_cw", [("degrees", "int")], "Rotate clockwise by certain degrees"),
    ("turn_ccw", [("degrees", "int")],
     "Rotate counterclockwise by certain degrees"),
    ("delay", [("milliseconds", "int")], "Wait for specified microseconds"),
    ("is_visible", [("object_name", "str")],
     "Check the visibility of target object"),
    ("object_x", [("object_name", "str")],
     "Get object's X-coordinate in (0,1)"),
    ("object_y", [("object_name", "str")],
     "Get object's Y-coordinate in (0,1)"),
    ("object_w", [("object_name", "str")], "Get object's width in (0,1)"),
    ("object_h", [("object_name", "str")], "Get object's height in (0,1)"),
    ("log", [("text", "str")], "Output text to console"),
    ("picture", [], "Take a picture"),
    ("query", [("question", "str")], "Query the LLM for reasoning"),
]

HIGH_LEVEL = [
    ("sweeping", "8{_1=iv,$1;?_1==True{->True}tc,45}->False",
     [("object_name", "str")],
     "Rotate to find a certain object when it's *not* in current scene"),
    ("sweeping_abstract", "8{_1=q,$1;?_1!=False{->_1}tc,45}->False",
     [("question", "str")],
     "Rotate to find an abstract object by a description when it's *not* "
     "in current scene"),
    ("approach", "mf,120", [], "Approach a certain object"),
    ("orienting",
     "4{_1=ox,$1;?_1>0.6{tc,15};?_1<0.4{tu,15};_2=ox,$1;?_2<0.6&_2>0.4{->True}}"
     "->False",
     [("object_name", "str")], "Rotate to align with a certain object"),
    ("goto", "?o($1)==True{a();->True}->False",
     [("object_name", "str")], "Orient to and approach a certain object"),
]

ALIASES = [
    ("scan", "sweeping"),
    ("scan_abstract", "sweeping_abstract"),
]


def build_default_registry():
    reg = SkillRegistry()
    for name, args, description in LOW_LEVEL:
        reg.register_low(name, description,
                         [SkillArg(n, t) for n, t in args], name)
    for name, definition, args, description in HIGH_LEVEL:
        reg.register_high(name, description, definition,
                          [SkillArg(n, t) for n, t in args])
    for alias, target in ALIASES:
        reg.register_alias(alias, target)
    return reg
