import io
import json
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigiduality.cli.ast import (Arrow, Command, FieldSpec, FormArg, HomDef, LocalizeDef,
                                 ModuleDef, RingDef, Session, TowerDef, format_session)
from rigiduality.cli.main import load_schema, main, report_json
from rigiduality.cli.parser import SessionSyntaxError, parse_session, parse_session_recover
from rigiduality.cli.session import Executor, Flags, execute_session
from rigiduality.syntax import BinOp, Neg, Num, Pow, Var

SESSIONS = Path(__file__).resolve().parent.parent / "sessions"

POWER_MAP = """
ring K = QQ[];
ring B = QQ[s];
ring C = QQ[t];
hom f : B -> C = (t^3);
tower T over K : B, C;
traceform T B -> C : t^2 * dt;
traceform T B -> C : t * dt;
traceform T B -> C : dt;
"""


# -- parsing ------------------------------------------------------------------------

def test_ring_definition():
    s = parse_session("ring A = QQ[x,y]/(y^2 - x^3);")
    (st_,) = s.statements
    assert isinstance(st_, RingDef)
    assert st_.name == "A" and st_.base == FieldSpec("QQ") and st_.variables == ("x", "y")
    assert st_.relations == (BinOp("-", Pow(Var("y"), 2), Pow(Var("x"), 3)),)


def test_hom_definition():
    s = parse_session("ring B = QQ[s]; ring C = QQ[t]; hom f : B -> C = (t^2);")
    assert s.statements[2] == HomDef("f", "B", "C", (Pow(Var("t"), 2),))


def test_malformed_ring_diagnostic():
    with pytest.raises(SessionSyntaxError) as err:
        parse_session("ring A = QQ[x/(;")
    d = err.value.diagnostics[0]
    assert (d.line, d.col) == (1, 14)
    assert set(d.expected) == {"]", ","}


def test_recovery_collects_every_error():
    text = "ring A = QQ[x;\ndim A;\nring B = QQ[y];\nfoo B;\ndim B;\ndim C;"
    s, diags = parse_session_recover(text)
    assert [(d.kind, d.line) for d in diags] == [("syntax", 1), ("syntax", 4),
                                                 ("binding", 2), ("binding", 6)]
    assert len(s.statements) == 4


def test_binding_errors():
    _, diags = parse_session_recover("ring A = QQ[x]; ring A = QQ[y]; module M = A; res A;")
    msgs = [d.message for d in diags]
    assert "'A' is already defined" in msgs
    assert any("expected a module" in m for m in msgs)


def test_lexical_error_has_location():
    _, diags = parse_session_recover("ring A = QQ[x];\ndim A $;")
    assert diags[0].kind == "lexical" and (diags[0].line, diags[0].col) == (2, 7)


def test_fp_field_and_forms():
    s = parse_session("ring A = Fp(7)[x]; tower T over A : A;"
                      "traceform T A -> A : 2/3*x * d(x,y);")
    assert s.statements[0].base == FieldSpec("Fp", 7)
    cmd = s.statements[2]
    assert cmd.args[1] == Arrow("A", "A")
    assert cmd.args[2] == FormArg(BinOp("*", BinOp("/", Num(2), Num(3)), Var("x")), ("x", "y"))


def test_spans_cover_statements():
    text = "ring A = QQ[x];\n  module M = A/(x^2);  dim   A ;"
    s = parse_session(text)
    pieces = [text[st_.span[2]:st_.span[3]] for st_ in s.statements]
    assert pieces == ["ring A = QQ[x];", "module M = A/(x^2);", "dim   A ;"]
    assert [st_.span[:2] for st_ in s.statements] == [(1, 1), (2, 3), (2, 24)]


@pytest.mark.parametrize("path", sorted(SESSIONS.glob("*.rgd")), ids=lambda p: p.name)
def test_round_trip_shipped_sessions(path):
    s = parse_session(path.read_text())
    assert parse_session(format_session(s)) == s


# -- round trip on generated sessions ------------------------------------------------

names = st.sampled_from(["A", "B", "C", "M", "f", "T"])
vars_ = st.sampled_from(["x", "y", "s", "t", "d", "dt"])
exprs = st.recursive(
    st.one_of(st.builds(Num, st.integers(0, 50)), st.builds(Var, vars_)),
    lambda sub: st.one_of(
        st.builds(Neg, sub),
        st.builds(BinOp, st.sampled_from("+-*/"), sub, sub),
        st.builds(Pow, sub, st.integers(-3, 5))),
    max_leaves=8)
expr_tuples = st.lists(exprs, min_size=1, max_size=3).map(tuple)


def commands():
    return st.one_of(
        st.builds(lambda n, e: Command("nf", (n, (":expr", e))), names, exprs),
        st.builds(lambda n, k: Command("res", (n, k)), names, st.integers(0, 5)),
        st.builds(lambda n: Command("res", (n,)), names),
        st.builds(lambda i, a, b: Command("ext", (i, a, b)), st.integers(0, 3), names, names),
        st.builds(lambda n, l: Command("groebner", (n, (":list", l))), names, expr_tuples),
        st.builds(lambda n: Command("etale-pairing", (n,)), names),
        st.builds(lambda t, a, b, e, w: Command("traceform", (t, Arrow(a, b), FormArg(e, w))),
                  names, names, names, exprs,
                  st.one_of(st.none(), st.lists(vars_, min_size=1, max_size=2).map(tuple))),
        st.builds(lambda n: Command("check", (n,)), st.sampled_from(["traceform", "omega"])),
        st.just(Command("check", ())),
    )


statements = st.one_of(
    st.builds(RingDef, names, st.one_of(st.just(FieldSpec("QQ")),
                                        st.builds(FieldSpec, st.just("Fp"), st.just(5)), names),
              st.lists(vars_, max_size=3, unique=True).map(tuple),
              st.lists(exprs, max_size=2).map(tuple)),
    st.builds(LocalizeDef, names, names, exprs),
    st.builds(HomDef, names, names, names, st.lists(exprs, max_size=2).map(tuple)),
    st.builds(lambda n, r, e: ModuleDef(n, "quotient", r, e), names, names, expr_tuples),
    st.builds(lambda n, r, k: ModuleDef(n, "free", r, (k,)), names, names, st.integers(1, 3)),
    st.builds(lambda n, r: ModuleDef(n, "omega", r), names, names),
    st.builds(lambda n, r, rows: ModuleDef(n, "coker", r, rows), names, names,
              st.lists(expr_tuples, min_size=1, max_size=2).map(tuple)),
    st.builds(TowerDef, names, names, st.lists(names, min_size=1, max_size=3).map(tuple)),
    commands(),
)


@settings(max_examples=300)
@given(st.lists(statements, max_size=6))
def test_print_parse_round_trip(stmts):
    s = Session(tuple(stmts))
    text = format_session(s)
    parsed, diags = parse_session_recover(text)
    assert not [d for d in diags if d.kind != "binding"], text
    assert parsed == s


# -- execution ----------------------------------------------------------------------

def test_power_map_session_records():
    recs = execute_session(parse_session(POWER_MAP))
    forms = [r.payload["form"] for r in recs if r.command.startswith("traceform")]
    assert forms == ["ds", "0", "0"]
    assert all(r.status == "ok" for r in recs)
    assert [r.index for r in recs] == list(range(len(recs)))


def test_empty_session(tmp_path):
    assert execute_session(parse_session("")) == []
    p = tmp_path / "empty.rgd"
    p.write_text("# nothing here\n")
    out = tmp_path / "out.json"
    assert main(["run", str(p), "--json", str(out)], out=io.StringIO()) == 0
    assert json.loads(out.read_text())["records"] == []


def test_omega_of_cusp_record():
    recs = execute_session(parse_session("ring A = QQ[x,y]/(y^2 - x^3); omega A;"))
    p = recs[-1].payload
    assert p["gorenstein"] is True and p["d"] == 1
    assert p["omega"]["generators"] == 1 and p["omega"]["relations"] == []


def test_errors_continue_unless_fail_fast():
    text = "ring A = QQ[x]; nf A : 1/x; dim A;"
    recs = execute_session(parse_session(text))
    assert [r.status for r in recs] == ["ok", "error", "ok"]
    assert "not a unit" in recs[1].payload["error"]
    recs = execute_session(parse_session(text), Flags(fail_fast=True))
    assert [r.status for r in recs] == ["ok", "error"]


def test_inconclusive_records_carry_their_bound():
    recs = execute_session(parse_session("ring A = QQ[x]; rigidity A 0;"))
    r = recs[-1]
    assert r.status == "inconclusive" and r.provenance["bound"] == 0


def test_forms_in_two_variables():
    text = """ring K = QQ[]; ring B = QQ[x, y]; ring C = QQ[x, t];
    hom f : B -> C = (x, t^2); tower T over K : B, C;
    traceform T B -> C : x*t^3 * d(x,t);
    traceform T B -> C : t * d(t,x);
    pullback T B -> C : d(x,y);
    traceform T B -> C : t * dt;"""
    recs = execute_session(parse_session(text))
    assert [r.payload.get("form") for r in recs[5:8]] == ["x*y * d(x,y)", "-d(x,y)",
                                                          "2*t * d(x,t)"]
    assert recs[8].status == "error"


def test_json_report_validates(tmp_path):
    schema = load_schema()
    for path in sorted(SESSIONS.glob("*.rgd")):
        out = tmp_path / (path.stem + ".json")
        main(["run", str(path), "--json", str(out)], out=io.StringIO())
        doc = json.loads(out.read_text())
        jsonschema.validate(doc, schema)
        s = parse_session(path.read_text())
        assert len(doc["records"]) == len(s.statements)
        assert [r["span"]["line"] for r in doc["records"]] == [x.span[0] for x in s.statements]


def test_output_is_deterministic():
    def run():
        recs = execute_session(parse_session((SESSIONS / "cusp.rgd").read_text()),
                               Flags(seed=5))
        doc = report_json(recs, Flags(seed=5))
        for r in doc["records"]:
            r.pop("wall_time")
        return doc
    assert run() == run()


# -- entry points ---------------------------------------------------------------------

def test_exit_codes(tmp_path):
    ok = tmp_path / "ok.rgd"
    ok.write_text("ring A = QQ[x]; dim A;")
    bad = tmp_path / "bad.rgd"
    bad.write_text("ring A = QQ[x/(;")
    err = tmp_path / "err.rgd"
    err.write_text("ring A = QQ[x]; nf A : 1/x;")
    out = io.StringIO()
    assert main(["run", str(ok)], out=out) == 0
    assert main(["run", str(err)], out=out) == 1
    assert main(["run", str(bad)], out=out) == 2
    assert main(["run", str(tmp_path / "missing.rgd")], out=out) == 2
    assert main(["bogus"], out=out) == 2
    assert main(["check", "--only", "no-such-check"], out=out) == 2
    assert main(["run", str(ok), "--max-ext", "-1"], out=out) == 2


def test_check_only_traceform():
    out = io.StringIO()
    assert main(["check", "--only", "traceform"], out=out) == 0
    rows = [l for l in out.getvalue().splitlines() if l.startswith(("PASS", "FAIL"))]
    assert len(rows) == 4 and all(r.startswith("PASS") for r in rows)


def test_check_verdicts_stable_across_seeds(tmp_path):
    verdicts = []
    for seed in (0, 7):
        path = tmp_path / ("s%d.json" % seed)
        main(["check", "--only", "omega,biduality,presentation", "--seed", str(seed),
              "--json", str(path)], out=io.StringIO())
        verdicts.append([(c["name"], c["passed"]) for c in json.loads(path.read_text())["checks"]])
    assert verdicts[0] == verdicts[1] and all(p for _, p in verdicts[0])


def test_check_command_inside_session():
    recs = execute_session(parse_session("check etale;"))
    assert recs[0].status == "ok" and recs[0].payload["all_passed"]


def test_repl_session():
    stdin = io.StringIO("ring A = QQ[x,\ny];\ndim A;\ndim Z;\nnf A : x*y\n - y*x;\n:quit\n")
    out = io.StringIO()
    from rigiduality.cli.main import build_parser, cmd_repl
    code = cmd_repl(build_parser().parse_args(["repl"]), out, stdin=stdin)
    text = out.getvalue()
    assert code == 0
    assert "dim: 2" in text and "'Z' is not defined" in text and "normal_form: 0" in text


def test_executor_keeps_state_between_statements():
    ex = Executor()
    ex.execute(parse_session("ring A = QQ[x];").statements[0])
    rec = ex.execute(parse_session("ring B = QQ[x]; dim B;").statements[1])
    assert rec.status == "error"   # B was never defined in this executor
