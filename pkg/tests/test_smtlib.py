import pytest

from strsolve import regex as rx
from strsolve.constraints import Equation, Length, Lit, Membership, Or, Var
from strsolve.errors import SyntaxParseError, UnsupportedError
from strsolve.intervals import IntervalSet
from strsolve.smtlib import encode_string, parse_smt, print_smt


def test_parse_simple_membership():
    script = parse_smt('(declare-const x String)'
                       '(assert (str.in_re x (re.+ (re.range "a" "c"))))'
                       '(check-sat)')
    assert script.declarations == (("x", "String"),)
    assert script.assertions == (Membership("x", rx.Plus(rx.CharClass(
        IntervalSet.from_pairs((97, 99))))),)
    assert script.has_check_sat


def test_parse_nary_equation():
    script = parse_smt('(declare-const url String)(declare-const domain String)'
                       '(declare-const path String)'
                       '(assert (= url (str.++ "http://" domain "/" path)))')
    assert script.assertions == (Equation(Var("url"),
                                          (Lit("http://"), Var("domain"),
                                           Lit("/"), Var("path"))),)
    assert not script.has_check_sat


def test_parse_length_constraints():
    script = parse_smt('(declare-const x String)'
                       '(assert (<= (str.len x) 6))'
                       '(assert (> 2 (str.len x)))'
                       '(assert (= (str.len x) 1))')
    assert script.assertions == (Length("x", "<=", 6), Length("x", "<", 2),
                                 Length("x", "=", 1))


def test_parse_and_or():
    script = parse_smt('(declare-const x String)(declare-const y String)'
                       '(assert (and (= x y) (str.in_re x re.allchar)))'
                       '(assert (or (= x "a") (and (= x "b") (= y "c"))))')
    assert script.assertions[0] == Equation(Var("x"), (Var("y"),))
    assert script.assertions[1] == Membership("x", rx.AnyChar())
    assert script.assertions[2] == Or(((Equation(Var("x"), (Lit("a"),)),),
                                       (Equation(Var("x"), (Lit("b"),)),
                                        Equation(Var("y"), (Lit("c"),)))))


def test_parse_legacy_spellings():
    script = parse_smt('(declare-const x String)'
                       '(assert (str.in.re x (str.to.re "ab")))')
    assert script.assertions == (Membership("x", rx.Concat((rx.Literal(97),
                                                            rx.Literal(98)))),)


def test_parse_regex_operators():
    script = parse_smt(
        '(declare-const x String)'
        '(assert (str.in_re x (re.++ (re.* re.allchar) (str.to_re "<script>") (re.* re.allchar))))'
        '(assert (str.in_re x (re.union (str.to_re "a") (re.range "c" "d"))))'
        '(assert (str.in_re x (re.opt (re.+ re.none))))'
        '(assert (str.in_re x re.all))')
    star_any = rx.Star(rx.AnyChar())
    first = script.assertions[0].regex
    assert first.items[0] == star_any and first.items[-1] == star_any
    # unions of single-character pieces normalize into one class
    assert script.assertions[1].regex == rx.CharClass(IntervalSet.from_pairs((97, 97), (99, 100)))
    assert script.assertions[2].regex == rx.Opt(rx.Plus(rx.Never()))
    assert script.assertions[3].regex == star_any


def test_parse_re_range_degenerate():
    script = parse_smt('(declare-const x String)'
                       '(assert (str.in_re x (re.range "b" "a")))'
                       '(assert (str.in_re x (re.range "ab" "c")))')
    assert script.assertions[0].regex == rx.Never()
    assert script.assertions[1].regex == rx.Never()


def test_string_escapes():
    script = parse_smt('(declare-const x String)'
                       '(assert (= x "say ""hi"" \\u{61}\\u0062\\n"))')
    (eq,) = script.assertions
    assert eq.rhs == (Lit('say "hi" ab\\n'),)  # plain backslash stays a backslash


def test_encode_decode_round_trip():
    words = ['plain', 'quote " here', 'back\\slash', 'unié\U0001d11e', 'nl\ntab\t']
    for w in words:
        script = parse_smt(f'(declare-const x String)(assert (= x "{encode_string(w)}"))')
        assert script.assertions[0].rhs == (Lit(w),)


def test_literal_equality_allowed():
    script = parse_smt('(assert (= "ab" (str.++ "a" "b")))')
    assert script.assertions == (Equation(Lit("ab"), (Lit("a"), Lit("b"))),)


@pytest.mark.parametrize("src,needle", [
    ('(declare-const x Int)', "sort Int"),
    ('(push 1)', "command push"),
    ('(declare-const x String)(assert (= x y z))', "non-binary"),
    ('(declare-const x String)(assert (str.contains x "a"))', "operator str.contains"),
    ('(declare-const x String)(assert (= "a" x))', "literal left-hand side"),
    ('(declare-const x String)(assert (= (str.++ x "a") x))', "left-hand side"),
    ('(declare-const x String)(assert (str.in_re x (re.comp (str.to_re "a"))))', "re.comp"),
    ('(declare-const x String)(assert (< (str.len x) y))', "non-constant"),
    ('(declare-const x String)(assert (< x 3))', "arithmetic comparison"),
    ('(declare-const x String)(assert x)', "not an application"),
])
def test_unsupported_inputs(src, needle):
    with pytest.raises(UnsupportedError) as err:
        parse_smt(src)
    assert needle in str(err.value)


@pytest.mark.parametrize("src", [
    '(declare-const x String',            # unbalanced
    '(declare-const x String))',          # extra paren
    '(declare-const x String)(assert (= x "unterminated))',
    '(declare-const x String)(declare-const x String)',
    '(assert (= y "a"))',                 # undeclared variable
    '(declare-const x String)(assert (<= (str.len x) -2))',
])
def test_syntax_errors(src):
    with pytest.raises(SyntaxParseError):
        parse_smt(src)


def test_comments_and_ignored_commands():
    script = parse_smt('; a comment\n(set-logic QF_S)\n(set-info :status sat)\n'
                       '(declare-const x String) ; trailing\n(check-sat)\n(exit)\n')
    assert script.declarations == (("x", "String"),)
    assert script.has_check_sat


SAMPLES = [
    '(declare-const x String)(assert (str.in_re x (re.+ (re.range "a" "c"))))(check-sat)',
    '(declare-const url String)(declare-const domain String)(declare-const path String)'
    '(assert (= url (str.++ "http://" domain "/" path)))(check-sat)',
    '(declare-const x String)(assert (<= (str.len x) 6))(check-sat)',
    '(declare-const x String)(declare-const y String)'
    '(assert (or (= x "a") (and (= x y) (str.in_re y (re.* (re.union (str.to_re "ab") re.allchar))))))',
    '(declare-const x String)(assert (str.in_re x (re.union (re.range "0" "9") (re.range "a" "f"))))',
    '(declare-const x String)(assert (str.in_re x re.none))(assert (str.in_re x re.allchar))',
    '(declare-const x String)(assert (str.in_re x (re.opt (str.to_re "weird ""quote"" é"))))',
]


@pytest.mark.parametrize("src", SAMPLES)
def test_print_parse_round_trip(src):
    script = parse_smt(src)
    printed = print_smt(script)
    assert parse_smt(printed) == script
    # printing is a fixed point from the first round on
    assert print_smt(parse_smt(printed)) == printed
