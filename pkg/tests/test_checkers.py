"""Per-rule unit tests over the operation examples."""
from ccomply.rules import BehaviorClass, Certainty
from rule_helpers import PRELUDE, kinds_of, run_rule


def single(findings):
    assert len(findings) == 1, [f.message for f in findings]
    return findings[0]


class TestShiftRange:
    def test_uint32_shift_by_32_is_definite_undefined(self):
        f = single(run_rule(
            "void f(void) { uint32_t i = 1; i = i << 32; useu(i); }", "R12.2"
        ))
        assert f.certainty is Certainty.DEFINITE
        assert f.behavior_class is BehaviorClass.UNDEFINED
        assert f.evidence

    def test_masked_shift_count_is_clean(self):
        assert run_rule(
            "void f(void) { uint32_t i = 1; i = i << (32 & 0x1F); useu(i); }", "R12.2"
        ) == []

    def test_partial_range_is_caution(self):
        # Independent check: n in [0, 40] really contains both legal (0..31)
        # and illegal (32..40) shift amounts.
        legal = set(range(32))
        assert any(n in legal for n in range(41)) and any(n not in legal for n in range(41))
        f = single(run_rule(
            "void f(uint32_t i, uint32_t n) { if (n <= 40u) { useu(i << n); } }",
            "R12.2",
        ))
        assert f.certainty is Certainty.CAUTION

    def test_in_range_variable_shift_is_clean(self):
        assert run_rule(
            "void f(uint32_t i, uint32_t n) { if (n < 32u) { useu(i << n); } }",
            "R12.2",
        ) == []

    def test_negative_constant_shift(self):
        f = single(run_rule("void f(int x) { use(x << -1); }", "R12.2"))
        assert f.certainty is Certainty.DEFINITE

    def test_narrow_type_promotes_before_width_check(self):
        # uint8_t promotes to 32-bit int, so shifting by 20 is legal.
        assert run_rule(
            "void f(uint8_t b) { use(b << 20); }", "R12.2"
        ) == []

    def test_compound_shift_assign_checked(self):
        f = single(run_rule(
            "void f(void) { uint32_t i = 1; i <<= 32; useu(i); }", "R12.2"
        ))
        assert f.certainty is Certainty.DEFINITE


class TestUninitializedRead:
    def test_plain_uninit_read_definite(self):
        f = single(run_rule("void f(void) { int x; use(x); }", "R9.1"))
        assert f.certainty is Certainty.DEFINITE
        assert f.behavior_class is BehaviorClass.UNDEFINED
        assert f.evidence  # cites the declaration

    def test_one_branch_assignment_still_definite(self):
        f = single(run_rule(
            "void f(int a) { int x; if (a) { x = 1; } if (a) { use(x); } }", "R9.1"
        ))
        assert f.certainty is Certainty.DEFINITE

    def test_escaped_then_read_is_caution(self):
        f = single(run_rule(
            "extern void fill(int *);\n"
            "void f(void) { int x; int *p = &x; fill(p); use(x); }",
            "R9.1",
        ))
        assert f.certainty is Certainty.CAUTION

    def test_both_branches_assigned_clean(self):
        assert run_rule(
            "void f(int a) { int x; if (a) { x = 1; } else { x = 2; } use(x); }",
            "R9.1",
        ) == []

    def test_initializer_clean(self):
        assert run_rule("void f(void) { int x = 0; use(x); }", "R9.1") == []


class TestUnreachable:
    def test_statement_after_return(self):
        f = single(run_rule("void f(void) { return; use(1); }", "R2.1"))
        assert f.certainty is Certainty.DEFINITE

    def test_if_zero_body(self):
        f = single(run_rule("void f(void) { if (0) { use(1); } use(2); }", "R2.1"))
        assert f.certainty is Certainty.DEFINITE
        assert any("always" in ev.note for ev in f.evidence)

    def test_interval_dead_else_branch(self):
        # Oracle: x*0 == 0 holds for every int x, so the else never runs.
        assert all((x * 0) == 0 for x in range(-300, 300))
        f = single(run_rule(
            "void f(int x) { if (x * 0 == 0) { use(1); } else { use(2); } }", "R2.1"
        ))
        assert f.certainty is Certainty.DEFINITE
        assert any("condition" in ev.note for ev in f.evidence)

    def test_while_true_following_code(self):
        f = single(run_rule("void f(void) { while (1) { get(); } use(1); }", "R2.1"))
        assert f.certainty is Certainty.DEFINITE

    def test_reachable_code_clean(self):
        assert run_rule(
            "void f(int a) { if (a) { use(1); } else { use(2); } use(3); }", "R2.1"
        ) == []


class TestDeadCode:
    def test_overwritten_store_flagged(self):
        f = single(run_rule("void f(void) { int x; x = 1; x = 2; use(x); }", "R2.2"))
        assert f.span.start.line == PRELUDE.count("\n") + 1
        assert "x" in f.message

    def test_void_call_not_flagged(self):
        assert run_rule("void f(void) { (void)get(); }", "R2.2") == []

    def test_unused_pure_computation_flagged(self):
        f = single(run_rule(
            "void f(int x) { int y; y = x + 1; use(x); }", "R2.2"
        ))
        assert "y" in f.message

    def test_pure_expression_statement_flagged(self):
        f = single(run_rule("void f(int a, int b) { a * b; use(a); }", "R2.2"))
        assert f.certainty is Certainty.DEFINITE

    def test_volatile_store_never_flagged(self):
        assert run_rule(
            "void f(void) { volatile int v; v = 1; v = 2; }", "R2.2"
        ) == []

    def test_global_store_never_flagged(self):
        assert run_rule("int g;\nvoid f(void) { g = 1; g = 2; }", "R2.2") == []

    def test_live_store_clean(self):
        assert run_rule("void f(void) { int x; x = 1; use(x); }", "R2.2") == []


class TestConstPointer:
    def test_read_only_param_flagged(self):
        f = single(run_rule("void f(int *p) { use(*p); }", "R8.13"))
        assert "p" in f.message and f.certainty is Certainty.DEFINITE

    def test_written_through_param_clean(self):
        assert run_rule("void f(int *p) { *p = 1; }", "R8.13") == []

    def test_passing_to_const_taking_callee_flagged(self):
        f = single(run_rule("void f(int *p) { usecp(p); }", "R8.13"))
        assert "p" in f.message

    def test_passing_to_nonconst_taking_callee_clean(self):
        assert run_rule("void f(int *p) { usep(p); }", "R8.13") == []

    def test_unknown_callee_is_havoc(self):
        assert run_rule(
            "extern void mystery();\nvoid f(int *p) { mystery(p); }", "R8.13"
        ) == []

    def test_index_write_clean_index_read_flagged(self):
        assert run_rule("void f(int *p) { p[2] = 5; }", "R8.13") == []
        f = single(run_rule("void f(int *p) { use(p[2]); }", "R8.13"))
        assert "p" in f.message

    def test_address_escape_is_havoc(self):
        assert run_rule(
            "extern void grab(int **);\nvoid f(int *p) { grab(&p); use(*p); }",
            "R8.13",
        ) == []

    def test_const_pointee_not_a_candidate(self):
        assert run_rule("void f(const int *p) { use(*p); }", "R8.13") == []

    def test_assigning_into_nonconst_pointer_clean(self):
        assert run_rule(
            "void f(int *p) { int *q; q = p; *q = 1; }", "R8.13"
        ) == []


class TestIntPointerConversion:
    def test_cast_int_to_pointer(self):
        f = single(run_rule("void f(void) { int *p = (int *)0x4000; usep(p); }", "R11.4"))
        assert f.behavior_class is BehaviorClass.IMPLEMENTATION_DEFINED

    def test_cast_pointer_to_int(self):
        f = single(run_rule("void f(int *p) { uintptr_t u = (uintptr_t)p; (void)u; }", "R11.4"))
        assert "pointer to integer" in f.message

    def test_pointer_to_pointer_clean(self):
        assert run_rule("void f(int *p) { int *q = (int *)(void *)p; usep(q); }", "R11.4") == []

    def test_null_pointer_constant_exempt(self):
        assert run_rule("void f(void) { int *p = 0; usep(p); }", "R11.4") == []

    def test_implicit_conversion_in_assignment(self):
        f = single(run_rule("void f(int x) { int *p; p = x; usep(p); }", "R11.4"))
        assert "integer to object pointer" in f.message

    def test_implicit_conversion_in_argument(self):
        f = single(run_rule("void f(int x) { usep(x); }", "R11.4"))
        assert f.certainty is Certainty.DEFINITE

    def test_function_pointer_conversion_not_this_rule(self):
        assert run_rule(
            "typedef void (*fp_t)(void);\n"
            "void f(void) { fp_t fp = (fp_t)0x100; (void)fp; }",
            "R11.4",
        ) == []


class TestSideEffects:
    def test_increment_in_initializer(self):
        f = single(run_rule("void f(int i) { int x = i++; use(x); use(i); }", "R13.1"))
        assert f.certainty is Certainty.DEFINITE

    def test_call_in_initializer_conservative(self):
        f = single(run_rule("void f(void) { int x = get(); use(x); }", "R13.1"))
        assert f.certainty is Certainty.DEFINITE

    def test_plain_initializer_clean(self):
        assert run_rule("void f(int a, int b) { int x = a + b; use(x); }", "R13.1") == []

    def test_volatile_read_in_initializer(self):
        f = single(run_rule(
            "volatile int v;\nvoid f(void) { int x = v; use(x); }", "R13.1"
        ))
        assert f.certainty is Certainty.DEFINITE

    def test_call_in_logical_rhs(self):
        f = single(run_rule("void f(int a) { if (a && get()) { use(a); } }", "R13.5"))
        assert f.certainty is Certainty.DEFINITE

    def test_assignment_in_logical_rhs(self):
        f = single(run_rule("void f(int a, int b) { if (a || (b = 1)) { use(b); } }", "R13.5"))
        assert f.certainty is Certainty.DEFINITE

    def test_pure_logical_rhs_clean(self):
        assert run_rule("void f(int a, int b) { if (a && b) { use(a); } }", "R13.5") == []

    def test_side_effect_in_lhs_not_r13_5(self):
        assert run_rule("void f(int a, int b) { if (a++ && b) { use(a); } }", "R13.5") == []


class TestEvaluationOrder:
    def test_classic_unsequenced_increment(self):
        f = single(run_rule("void f(int i) { i = i++ + 1; use(i); }", "R13.2"))
        assert f.certainty is Certainty.DEFINITE

    def test_two_calls_in_arguments(self):
        f = single(run_rule(
            "extern int g1(void);\nextern int g2(void);\n"
            "extern void take(int, int);\n"
            "void f(void) { take(g1(), g2()); }",
            "R13.2",
        ))
        assert f.certainty is Certainty.DEFINITE
        assert "calls" in f.message

    def test_aliasing_derefs_are_caution(self):
        f = single(run_rule(
            "void f(int *p, int *q) { *p = *q + 1; }", "R13.2"
        ))
        assert f.certainty is Certainty.CAUTION

    def test_plain_expression_clean(self):
        assert run_rule("void f(int i) { i = i + 1; use(i); }", "R13.2") == []

    def test_write_and_read_across_operator(self):
        f = single(run_rule("void f(int i) { use((i = 1) + i); }", "R13.2"))
        assert f.certainty is Certainty.DEFINITE

    def test_sequenced_by_logical_and_clean(self):
        assert run_rule("void f(int i) { use((i = 1) && i); }", "R13.2") == []

    def test_deref_vs_nonescaped_local_clean(self):
        assert run_rule(
            "void f(int *p, int x) { use((*p = 1) + x); }", "R13.2"
        ) == []


class TestLoopRules:
    def test_float_counter(self):
        f = single(run_rule(
            "void f(void) { int s = 0; for (float x = 0; x < 1; x += 0.1f) { s++; } use(s); }",
            "R14.1",
        ))
        assert "x" in f.message

    def test_int_counter_clean(self):
        assert run_rule(
            "void f(int n) { for (int i = 0; i < n; ++i) { use(i); } }", "R14.1"
        ) == []

    def test_body_writes_counter(self):
        f = single(run_rule(
            "void f(int n) { int i; for (i = 0; i < n; ++i) { i++; } }", "R14.2"
        ))
        assert "body" in f.message

    def test_comma_init_flagged(self):
        f = single(run_rule(
            "void f(int n) { int i; int j; for (i = 0, j = 0; i < n; ++i) { use(j); } }",
            "R14.2",
        ))
        assert "init" in f.message

    def test_missing_clause_flagged(self):
        f = single(run_rule("void f(void) { for (;;) { break; } }", "R14.2"))
        assert "present" in f.message

    def test_well_formed_loop_clean(self):
        assert run_rule(
            "void f(int n) { int i; for (i = 0; i < n; i++) { use(i); } }", "R14.2"
        ) == []

    def test_type_range_invariant_condition(self):
        # Oracle: all 256 uint8_t values are below 256.
        assert all(u < 256 for u in range(256))
        f = single(run_rule(
            "void f(void) { uint8_t u = get(); if (u < 256) { use(1); } }", "R14.3"
        ))
        assert "always true" in f.message

    def test_while_one_exempt(self):
        assert run_rule(
            "void f(void) { while (1) { if (get()) { break; } } }", "R14.3"
        ) == []

    def test_do_while_zero_exempt(self):
        assert run_rule("void f(void) { do { get(); } while (0); }", "R14.3") == []

    def test_if_zero_not_exempt(self):
        f = single(run_rule("void f(void) { if (0) { use(1); } }", "R14.3"))
        assert "always false" in f.message

    def test_variable_condition_clean(self):
        assert run_rule(
            "void f(uint8_t u) { if (u < 10) { use(1); } }", "R14.3"
        ) == []


class TestLiteralWrite:
    def test_direct_literal_write(self):
        f = single(run_rule(
            'void f(void) { char *p = "String"; p[0] = \'X\'; }', "R1.3"
        ))
        assert f.certainty is Certainty.DEFINITE
        assert f.behavior_class is BehaviorClass.UNDEFINED

    def test_array_write_clean(self):
        assert run_rule(
            "void f(void) { char a[8]; char *p = a; p[0] = 'X'; usec(a[0]); }", "R1.3"
        ) == []

    def test_mixed_targets_caution(self):
        f = single(run_rule(
            "void f(int c) { char a[8]; char *p; "
            'if (c) { p = "lit"; } else { p = a; } p[0] = \'X\'; usec(a[0]); }',
            "R1.3",
        ))
        assert f.certainty is Certainty.CAUTION

    def test_deref_store_to_literal(self):
        f = single(run_rule('void f(void) { char *p = "abc"; *p = \'x\'; }', "R1.3"))
        assert f.certainty is Certainty.DEFINITE


class TestRecursion:
    def test_self_recursion(self):
        f = single(run_rule("void r(int n) { if (n) { r(n - 1); } }", "R17.2"))
        assert f.certainty is Certainty.DEFINITE
        assert "r" in f.message

    def test_mutual_recursion_two_findings_with_cycle_evidence(self):
        findings = run_rule(
            "void b(int);\n"
            "void a(int n) { if (n) { b(n - 1); } }\n"
            "void b(int n) { if (n) { a(n - 1); } }\n",
            "R17.2",
        )
        assert len(findings) == 2
        assert all(f.certainty is Certainty.DEFINITE for f in findings)
        for f in findings:
            assert any("a" in ev.note and "b" in ev.note for ev in f.evidence)

    def test_indirect_call_site_caution(self):
        findings = run_rule(
            "extern void h(void);\n"
            "void f(void) { void (*fp)(void) = h; fp(); }\n",
            "R17.2",
        )
        assert len(findings) == 1
        assert findings[0].certainty is Certainty.CAUTION

    def test_acyclic_program_clean(self):
        assert run_rule(
            "void leaf(void) { }\nvoid top(void) { leaf(); }\n", "R17.2"
        ) == []
