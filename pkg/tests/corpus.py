"""Fixed programs with initial abstract environments for the analyzer suites."""

import os

ACCEPTANCE = os.getenv("HYPOTHESIS_PROFILE") == "acceptance"

# Dynamic annotation checks: loop budget and concrete stores per program.
DYNAMIC_FUEL = 10_000 if ACCEPTANCE else 300
DYNAMIC_STORES = 100 if ACCEPTANCE else 15

SUM_PROGRAM = "while x < n do x := x + 1; y := x + y done"
EX1 = "while x < n do [le(x,n) /\\ pp(y,x)] x:=x+1; y:=x+y done"

CORPUS = [
    ("sum", SUM_PROGRAM, "x=[0,0],y=[0,0],n=[3,3]"),
    ("skip", "skip", ""),
    ("increment", "x := x + 1", "x=[0,0]"),
    ("straight_line", "x := 1; y := x + 2; x := y + y", "x=[0,0],y=[0,0]"),
    ("swap", "t := x; x := y; y := t", "x=[1,2],y=[3,4],t=[0,0]"),
    ("countdown", "while 0 < x do x := x + -1 done", "x=[0,10]"),
    ("nested", "while i < 3 do j := 0; while j < i do j := j + 1 done; i := i + 1 done", "i=[0,0],j=[0,0]"),
    ("divergent", "while 0 < 1 do x := x + 1 done", "x=[0,0]"),
    ("dead_test", "while 1 < 0 do x := x + 1 done", "x=[0,0]"),
    ("always_true", "while 0 < 1 do skip done", ""),
    ("unreachable_tail", "while 0 < 1 do skip done; x := 1", "x=[0,0]"),
    ("unbounded_inputs", "while x < n do x := x + 1 done", "x=[-inf,+inf],n=[-inf,+inf]"),
    ("decrement", "while y < x do x := x + -1 done", "x=[0,0],y=[-5,-5]"),
    ("offset_test", "while x + 1 < 5 do x := x + 1 done", "x=[0,0]"),
    ("two_counters", "while x < 10 do x := x + 1; y := y + 2 done", "x=[0,0],y=[0,0]"),
    ("expression_bound", "while x < y + 2 do x := x + 1 done", "x=[0,0],y=[1,3]"),
    ("inner_dead", "while x < 5 do while 1 < 0 do y := 1 done; x := x + 1 done", "x=[0,0],y=[0,0]"),
    ("sequential_loops", "while x < 3 do x := x + 1 done; while y < x do y := y + 1 done", "x=[0,0],y=[0,0]"),
    ("never_entered", "while x < 0 do x := x + 1 done", "x=[5,7]"),
    ("never_exits", "while x < 100 do skip done", "x=[0,5]"),
]

CORPUS_IDS = [name for name, _, _ in CORPUS]

LOOP_FREE = [entry for entry in CORPUS if "while" not in entry[1]]
