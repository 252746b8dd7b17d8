"""Shared ItemScript sources used across parser, printer, and runtime tests."""

VALID_SCRIPTS = [
    '$.log("hi");',
    "let x = 1;",
    "const speed = 2.5;",
    "let v = null;",
    "let ok = true && !false;",
    "let y = 1 + 2 * 3 - 4 / 2 % 3;",
    "let z = (1 + 2) * 3;",
    'let s = "a" + "b";',
    "let t = 1 < 2 ? 10 : 20;",
    "let u = -x;",
    "let w = --x;",
    "let arr = [1, 2, 3];",
    "let obj = {a: 1, b: [2, 3], c: {d: 4}};",
    'let mixed = {"a b": 1, plain: 2};',
    "x = 1; x += 2; x -= 1; x *= 3; x /= 2;",
    "if (x > 0) { x = 0; }",
    "if (x > 0) { x = 0; } else { x = 1; }",
    "if (x > 0) { x = 0; } else if (x < -1) { x = 1; } else { x = 2; }",
    "while (i < 10) { i += 1; }",
    "for (let i = 0; i < 3; i += 1) { total += i; }",
    "for (; i < 3;) { i += 1; }",
    "let f = (a, b) => a + b;",
    "let g = x => x * 2;",
    "let h = () => { return 1; };",
    "let fn = (a) => { let b = a + 1; return b; };",
    "$.onStart(() => { $.log(\"ready\"); });",
    "$.onUpdate((dt) => { let p = $.getPosition(); p.y += 1 * dt; $.setPosition(p); });",
    "$.onInteract((player) => { player.setJumpSpeedRate(3); });",
    """
$.onUpdate((dt) => {
  let t = $.state.t;
  if (t == null) {
    t = 0;
  }
  t += dt;
  $.state.t = t;
  $.setPosition(Vector3(0.5 * t, 1.5 + 0.5 * Math.sin(t * Math.PI), 2));
});
""",
    """
$.onGrab((player) => {
  $.setGravityScale(0.165);
});
$.onRelease((player) => {
  $.setUseGravity(true);
});
""",
    """
let count = 0;
$.onInteract((player) => {
  count += 1;
  $.log("pressed " + "again");
  if (count >= 3) {
    player.respawn();
  }
});
""",
    "let nested = ((a) => (b) => a + b)(1)(2);",
    "let idx = arr[0] + arr[1 + 1];",
    "let deep = obj.c.d;",
    "let cond = a == b != c;",
    "let chain = a || b && c;",
    'let msg = "line\\none" + "tab\\tend";',
    "let q = x >= 1 && x <= 9 || y != 0;",
    "return;",
]

INVALID_SCRIPTS = [
    "let x = 1",            # missing semicolon
    "let = 3;",             # missing name
    "const c;",             # const without initializer
    "1 +;",
    "if x > 0 { }",
    "while (true) { ",
    "let v = new Thing();",
    "class Foo {}",
    "this.x = 1;",
    "function f() {}",
    "try { x(); } catch (e) {}",
    "let s = `template`;",
    "let r = /abc/;",
    "let o = {1: 2};",
    "x ++;",
    "a === ;",
    "(a, b) => ;",
    "let x = (1;",
    'let s = "unterminated;',
    "/* never closed",
    "let x = 5 @ 3;",
    "else { }",
]
