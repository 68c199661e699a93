import init, { cone_svg, furstenberg_svg, torus_orbit_svg } from "./pkg/limitcone_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(target, f) {
  const el = $(target);
  el.textContent = "working...";
  // let the browser paint before the blocking call
  setTimeout(() => {
    try {
      el.innerHTML = f();
    } catch (e) {
      el.innerHTML = "";
      const p = document.createElement("p");
      p.className = "err";
      p.textContent = String(e.message || e);
      el.appendChild(p);
    }
  }, 10);
}

await init();

$("cone-run").onclick = () => show("cone", () => cone_svg($("cone-group").value, num("cone-depth")));
$("fb-run").onclick = () =>
  show("fb", () => furstenberg_svg($("fb-group").value, num("fb-depth"), num("fb-grid")));
$("to-run").onclick = () => show("to", () => torus_orbit_svg(num("to-alpha"), num("to-beta"), num("to-n")));

$("cone-run").click();
$("fb-run").click();
$("to-run").click();
