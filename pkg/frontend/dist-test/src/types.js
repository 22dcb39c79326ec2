// Wire formats of the play service. The client renders these verbatim and
// never derives game logic of its own.
export {};
