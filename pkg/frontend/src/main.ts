/** Entry point: wire config, API client, and wizard to the page. */

import { OakClient } from "./api.js";
import { loadConfig } from "./config.js";
import { Wizard } from "./wizard.js";

const root = document.getElementById("app");
if (root) {
  const config = loadConfig();
  const client = new OakClient({
    baseUrl: config.baseUrl,
    ...(config.bearerToken ? { bearerToken: config.bearerToken } : {}),
  });
  void new Wizard(root, client).start();
}
