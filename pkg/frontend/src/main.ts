import { ApiClient } from "./api";
import { App } from "./app";

// Same-origin by default; override with ?api=http://host:port for dev setups
// where the bundle is served separately from the model server.
const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app container");
}
void new App(root, new ApiClient(baseUrl)).start();
