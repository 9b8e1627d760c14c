// Bootstrap: create a session against the server hosting this page (or the
// URL given as ?server=...) and wire the console up.

import { GameClient } from "./api.js";
import { ConsoleController } from "./controller.js";
import { ConsoleStore } from "./store.js";
import type { Role } from "./types.js";
import { ConsoleUI } from "./ui.js";

async function boot(): Promise<void> {
    const query = new URLSearchParams(window.location.search);
    const server = query.get("server") ?? "";
    const role = (query.get("role") ?? "defender") as Role;
    const aiPolicy = query.get("ai") ?? "best-response";

    const client = new GameClient(server);
    const store = new ConsoleStore(role);
    const controller = new ConsoleController(client, store);
    const ui = new ConsoleUI(document.getElementById("console")!, store, controller);

    try {
        const session = await client.createSession(role, aiPolicy);
        controller.attach(session.session_id);
        await controller.refresh();
    } catch {
        store.banner = "could not reach the game server";
    }
    ui.render();
}

void boot();
