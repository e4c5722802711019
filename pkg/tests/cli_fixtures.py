"""Fixture corpus for the command line: (command, items, flags, expected exit code)."""

CORPUS = [
    # fullness and units
    ("full", ["x1 x2 - x2 x1"], [], 0),
    ("full", ["[x1, x1; x2, x2]"], [], 1),
    ("full", ["[x1; x2]"], [], 1),
    ("unit", ["[1, x1; 0, 1]"], [], 0),
    ("unit", ["x1"], [], 1),
    # atoms and blocks
    ("atom", ["x1x2-x2x1"], [], 0),
    ("atom", ["x1 + x2 x3"], [], 0),
    ("atom", ["x1 x2"], [], 1),
    ("atom", ["[1, x1; 0, 1]"], [], 1),
    ("atom", ["0"], [], 1),
    ("blocks", ["x1 x2"], [], 0),
    ("linearize", ["x1 x2 - x2 x1"], [], 0),
    ("linearize", ["0"], [], 1),
    # pencils and associativity
    ("equiv", ["L=[-1, 0, x2; 0, -1, x1; x1, -x2, 0]", "M=[-1, 0, x2; 0, -1, x1; x1, -x2, 0]"], [], 0),
    ("equiv", ["L=[1 + x1, 0; 0, 1]", "M=[1 + x2, 0; 0, 1]"], [], 1),
    ("stable-assoc", ["f=x1", "g=x2"], [], 1),
    ("stable-assoc", ["f=x1x2-x2x1", "g=x2x1-x1x2"], [], 0),
    # containment
    ("contain", ["f=x1", "h=x2"], [], 1),
    ("contain", ["f=x1", "h=x1x2"], [], 2),
    ("contain", ["f=x1", "h=x1x2"], ["--certified"], 0),
    ("contain", ["f=x1x2-x2x1", "h=(x1x2-x2x1)(1+x1)"], ["--certified"], 0),
    ("contain", ["f=x1", "f=x2", "h=x3"], [], 1),
    ("contain-real-analytic", ["f=x1", "h=x1'"], [], 0),
    ("contain-real-analytic", ["f=x1", "h=x2"], [], 1),
    ("contain-real-hermitian", ["f=x1+x1'", "h=(x1+x1')x2"], [], 0),
    ("contain-real-hermitian", ["f=x1x1'+x2x2'", "h=x1"], [], 2),
    # Gleichstellensaetze and signatures
    ("gleich", ["L=[1, x1; x2, 1]", "M=[1, x1'; x2', 1]"], [], 0),
    ("gleich", ["L=[1 + x1]", "M=[1 + x2]"], [], 1),
    ("gleich-hermitian", ["L=[1, x1; x1', 1]", "M=[-1, -x1; -x1', -1]"], [], 0),
    ("signature", ["H=[1, 2; 2, 1]"], [], 0),
    ("signature", ["f=x1 x1'", "X1=[1, 2; 0, 1]"], [], 0),
    ("unsignatured", ["x1 x1' - x1' x1"], [], 0),
    ("unsignatured", ["1 + x1' x1"], [], 2),
    # slack ideal and certificates
    ("slack-reduce", ["h=y'y x1", "f=1 - x1'x1"], [], 0),
    ("slack-member", ["h=y' y - (1 - x1' x1)", "f=1 - x1' x1"], [], 0),
    ("slack-member", ["h=1", "f=1 - x1' x1"], [], 1),
    ("psatz-verify", ["h=1", "f=1 - x1' x1", "fj=1"], [], 0),
    ("psatz-verify", ["h=-1", "f=1 - x1' x1"], [], 1),
    ("psatz-verify", ['cert={"f": "1 - x1\' x1", "fj": ["x1"], "h": "1 - y\' y"}'], [], 0),
    ("psatz-verify", ["h=1", "f=-1 - x1' x1", "fj=1"], [], 2),
    # evaluation and probes
    ("eval", ["f=x1 x2", "X1=[1, 2; 0, 1]", "X2=[0, 1; 1, 0]"], [], 0),
    ("probe-real", ["f=x1 + x1'", "h=1"], [], 1),
    ("probe-real", ["f=1 + x1' x1", "h=x2"], [], 2),
    # input errors
    ("atom", ["x1 +"], [], 3),
    ("atom", ["z1"], [], 3),
    ("contain", ["f=x1"], [], 3),
    ("slack-member", ["h=y", "f=3"], [], 3),
    ("slack-member", ["h=[1, 0; 0, 1]", "f=x1"], [], 3),
    ("signature", ["H=[1, 2; 3, 1]"], [], 3),
    ("eval", ["f=x1", "X1=[1, 2]"], [], 3),
    ("psatz-verify", ["h=1", "f=x1 x1 x1", "fj=1"], [], 3),
    ("psatz-verify", ['cert={"f": "1"}'], [], 3),
    ("psatz-verify", ["cert=not json"], [], 3),
    ("contain-real-analytic", ["f=x1'", "h=x1"], [], 3),
    ("gleich-hermitian", ["L=[1, x1; x1', 1]", "M=[1, x1; x1, 1]"], [], 3),
    ("equiv", ["L=x1 x2", "M=x1"], [], 3),
    ("atom", ["x1", "f=x2"], [], 3),
]
