import { GameClient } from "./client.js";
import { mountApp } from "./view.js";
const baseUrl = `${location.protocol}//${location.host}`;
function adaptBrowserSocket(url) {
    const ws = new WebSocket(url);
    const adapter = {
        onmessage: null,
        onerror: null,
        onclose: null,
        close: () => ws.close(),
    };
    ws.onmessage = (event) => adapter.onmessage?.({ data: event.data });
    ws.onerror = (event) => adapter.onerror?.(event);
    ws.onclose = (event) => adapter.onclose?.(event);
    return adapter;
}
const client = new GameClient({
    baseUrl,
    fetchFn: (url, init) => fetch(url, init),
    createSocket: adaptBrowserSocket,
});
const root = document.getElementById("app");
if (!root) {
    throw new Error("missing #app mount point");
}
mountApp(root, client);
