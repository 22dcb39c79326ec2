function element(tag, className, text) {
    const node = document.createElement(tag);
    if (className)
        node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
export function mountApp(root, client) {
    root.innerHTML = "";
    const controls = element("div", "controls");
    const strategySelect = element("select");
    for (const value of ["procedural", "diarised"]) {
        const option = element("option", undefined, value);
        option.value = value;
        strategySelect.append(option);
    }
    const thresholdInput = element("input");
    thresholdInput.type = "number";
    thresholdInput.min = "1";
    thresholdInput.value = "3";
    const noiseInput = element("input");
    noiseInput.type = "range";
    noiseInput.min = "0";
    noiseInput.max = "1";
    noiseInput.step = "0.05";
    noiseInput.value = "0";
    const noiseLabel = element("span", "noise-label", "hearing mix-ups: 0%");
    noiseInput.addEventListener("input", () => {
        noiseLabel.textContent = `hearing mix-ups: ${Math.round(Number(noiseInput.value) * 100)}%`;
    });
    const startButton = element("button", "start", "Start game");
    controls.append(element("label", undefined, "strategy"), strategySelect, element("label", undefined, "answers needed"), thresholdInput, element("label", undefined, "label noise"), noiseInput, noiseLabel, startButton);
    const status = element("div", "status");
    const flag = element("div", "flag");
    const options = element("ul", "options");
    const feed = element("div", "feed");
    const result = element("div", "result");
    const errorBox = element("div", "error");
    const inputs = element("div", "inputs");
    const playerBoxes = {
        P1: element("input"),
        P2: element("input"),
    };
    ["P1", "P2"].forEach((player) => {
        const row = element("div", `player-row ${player.toLowerCase()}`);
        const label = element("span", "player-label", player);
        const box = playerBoxes[player];
        box.placeholder = `${player} says...`;
        const send = element("button", undefined, "Say");
        const submit = () => {
            void client.send(player, box.value).then((accepted) => {
                if (accepted)
                    box.value = "";
            });
        };
        send.addEventListener("click", submit);
        box.addEventListener("keydown", (event) => {
            if (event.key === "Enter")
                submit();
        });
        row.append(label, box, send);
        inputs.append(row);
    });
    startButton.addEventListener("click", () => {
        void client.start({
            strategy: strategySelect.value,
            threshold: Number(thresholdInput.value),
            pConfusion: Number(noiseInput.value),
        });
    });
    root.append(controls, status, flag, options, feed, inputs, result, errorBox);
    const render = (view) => {
        const locked = view.controlsLocked || view.sessionId !== null;
        strategySelect.disabled = locked;
        thresholdInput.disabled = locked;
        noiseInput.disabled = locked;
        startButton.disabled = view.sessionId !== null;
        status.textContent = view.sessionId
            ? `${view.controls.strategy}, answers needed ${view.controls.threshold} | ` +
                `round ${view.round} of ${view.totalRounds} | score ${view.score} | ${view.phase}`
            : "configure the game and press start";
        flag.textContent = view.question?.flag ?? "";
        options.innerHTML = "";
        for (const name of view.question?.options ?? []) {
            options.append(element("li", "option", name));
        }
        feed.innerHTML = "";
        for (const bubble of view.feed) {
            const row = element("div", bubble.speaker === "agent" ? "bubble agent" : `bubble player ${bubble.speaker.toLowerCase()}`);
            row.append(element("span", "who", bubble.speaker), element("span", "what", bubble.text));
            feed.append(row);
        }
        feed.scrollTop = feed.scrollHeight;
        result.textContent = view.finished ? (view.resultText ?? "game over") : "";
        result.classList.toggle("visible", view.finished);
        errorBox.textContent = view.connectionError ?? "";
        for (const box of Object.values(playerBoxes)) {
            box.disabled = view.sessionId === null || view.finished;
        }
    };
    client.onChange(render);
    render(client.getView());
}
